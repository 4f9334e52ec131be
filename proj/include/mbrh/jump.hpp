// jump.hpp - jump matrices of the RH problems: mixed problem via K(+-),
// explicit whole-line jump, amplifier oval jumps, and their certificates.
#pragma once

#include "mbrh/spectral.hpp"

namespace mbrh {

enum class ProblemClass { Mixed, WholeLine, AmplifierOval };

inline const char* to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::Mixed: return "mixed";
    case ProblemClass::WholeLine: return "whole-line";
    case ProblemClass::AmplifierOval: return "amplifier-oval";
  }
  return "?";
}

/// S+ = [[1, r+], [0, 1]]
inline Mat2 s_plus(cplx r_plus) { return make_mat(1.0, r_plus, 0.0, 1.0); }
/// S- = [[1, 0], [-r-bar-, 1]]
inline Mat2 s_minus(cplx r_bar_minus) { return make_mat(1.0, 0.0, -r_bar_minus, 1.0); }

/// K(+-)(x, lambda): the x(+-)-equation integrated from K(L) = exp(i L eta(+-) sigma3) S
/// down to the requested points.
inline std::vector<Mat2> k_solve(const SpectralProblem& pr, double lambda, const Mat2& S,
                                 int bank, const std::vector<double>& xs) {
  if (bank != 1 && bank != -1) throw Error(ErrorCode::InvalidArgument, "bank must be +-1");
  const cplx eta = eta_at(pr.profile(), lambda, bank);
  return pr.propagate_to(lambda, bank, exp_sigma3(pr.scenario().L * eta) * S, xs);
}

/// J = exp(-i(lambda t - x eta+) sigma3) (K+)^-1 K- exp(i(lambda t - x eta-) sigma3).
inline Mat2 jump_mixed(double t, double x, double lambda, const Mat2& Kp, const Mat2& Km,
                       const BroadeningProfile& p) {
  if (std::abs(det2(Kp) - 1.0) > 1e-5 || std::abs(det2(Km) - 1.0) > 1e-5)
    throw Error(ErrorCode::SingularK, "det K deviates from 1 at lambda = " + std::to_string(lambda));
  const EtaValues v = eta_boundary(p, lambda);
  const Mat2 J0 = inv2(Kp) * Km;
  return exp_sigma3(-(lambda * t - x * v.eta_plus)) * J0 *
         exp_sigma3(lambda * t - x * v.eta_minus);
}

/// Explicit whole-line jump from r+.
inline Mat2 jump_wholeline(double t, double x, double lambda, cplx r,
                           const BroadeningProfile& p) {
  const EtaValues v = eta_boundary(p, lambda);
  const cplx i = I_unit;
  return make_mat(1.0 + std::norm(r) * std::exp(2.0 * i * x * (v.eta_plus - v.eta_minus)),
                  -r * std::exp(-2.0 * i * lambda * t + 2.0 * i * x * v.eta_plus),
                  -std::conj(r) * std::exp(2.0 * i * lambda * t - 2.0 * i * x * v.eta_minus),
                  1.0);
}

/// Oval jump on gamma (a, b at z) or on its conjugate (a-bar, b-bar at z),
/// conjugated by exp(-i(z t - x eta(z)) sigma3).
inline Mat2 jump_oval(cplx z, cplx a, cplx b, double t, double x, const BroadeningProfile& p,
                      bool conjugate_branch) {
  if (std::abs(a) < 1e-8 || std::abs(b) < 1e-8)
    throw Error(ErrorCode::RegularityViolation, "a or b vanishes on the oval");
  const Mat2 J0 = conjugate_branch ? make_mat(1.0, -a / b, b / a, 0.0)
                                   : make_mat(0.0, -b / a, a / b, 1.0);
  const cplx th = z * t - x * eta_eval(p, z);
  return exp_sigma3(-th) * J0 * exp_sigma3(th);
}

/// a(z), b(z) continued off the axis from T(z) = w(0, z)^-1 Phi(0, z); for z in
/// the lower half-plane the pair returned is (a-bar(z), b-bar(z)).
inline std::pair<cplx, cplx> oval_spectral(const SpectralProblem& pr, cplx z) {
  const Mat2 T = inv2(pr.w0(z, 0)) * pr.phi0(z);
  if (z.imag() > 0.0) return {T(1, 1), T(0, 1)};
  return {T(0, 0), -T(1, 0)};
}

/// Node-wise jump table with certificates.
struct JumpData {
  ProblemClass cls = ProblemClass::Mixed;
  double t = 0.0, x = 0.0;
  std::vector<cplx> nodes;
  std::vector<Mat2> J;

  double det_error() const {
    double e = 0.0;
    for (const Mat2& m : J) e = std::max(e, std::abs(det2(m) - 1.0));
    return e;
  }

  /// max |J^-1(z) - J^dagger(z*)| over off-axis nodes whose conjugate is a node.
  double schwartz_error() const {
    double e = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].imag() == 0.0) continue;
      for (std::size_t j = 0; j < nodes.size(); ++j)
        if (std::abs(nodes[j] - std::conj(nodes[i])) < 1e-12 * (1.0 + std::abs(nodes[i])))
          e = std::max(e, max_abs(inv2(J[i]) - J[j].adjoint()));
    }
    return e;
  }
};

/// Minimum Hermitian-part eigenvalue over the real-axis nodes.
inline double posdef_check(const JumpData& d) {
  if (d.cls == ProblemClass::AmplifierOval)
    throw Error(ErrorCode::InvalidArgument, "posdef_check applies to real-axis jumps");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    if (d.nodes[i].imag() == 0.0) m = std::min(m, min_hermitian_eig(d.J[i]));
  return m;
}

/// Spectral data and K(+-) tables for the mixed problem at real nodes, cached
/// per x checkpoint.
class MixedJumpTable {
 public:
  MixedJumpTable(SpectralProblem pr, std::vector<double> lambdas, std::vector<double> xs)
      : pr_(std::move(pr)), lam_(std::move(lambdas)), xs_(std::move(xs)) {
    const std::size_t n = lam_.size();
    Kp_.assign(n, {});
    Km_.assign(n, {});
    phi0_.resize(n);
    wp0_.resize(n);
    wm0_.resize(n);
    parallel_for(n, [&](std::size_t i) {
      const double l = lam_[i];
      phi0_[i] = pr_.phi0(l);
      wp0_[i] = pr_.w0(l, +1);
      wm0_[i] = pr_.w0(l, -1);
    });
    table_ = transition_and_reflection(lam_, phi0_, wp0_, wm0_);
    parallel_for(n, [&](std::size_t i) {
      Kp_[i] = k_solve(pr_, lam_[i], s_plus(table_.r_plus[i]), +1, xs_);
      Km_[i] = k_solve(pr_, lam_[i], s_minus(table_.r_bar_minus[i]), -1, xs_);
    });
  }

  const SpectralProblem& problem() const { return pr_; }
  const SpectralTable& spectral() const { return table_; }
  const std::vector<double>& lambdas() const { return lam_; }
  const std::vector<double>& x_checkpoints() const { return xs_; }

  std::size_t x_index(double x) const {
    for (std::size_t j = 0; j < xs_.size(); ++j)
      if (std::abs(xs_[j] - x) < 1e-12) return j;
    throw Error(ErrorCode::InvalidArgument, "x = " + std::to_string(x) + " is not a checkpoint");
  }

  const Mat2& K_plus(std::size_t i, std::size_t j) const { return Kp_[i][j]; }
  const Mat2& K_minus(std::size_t i, std::size_t j) const { return Km_[i][j]; }

  JumpData jump(double t, double x) const {
    const std::size_t j = x_index(x);
    JumpData d;
    d.cls = ProblemClass::Mixed;
    d.t = t;
    d.x = x;
    for (std::size_t i = 0; i < lam_.size(); ++i) {
      d.nodes.emplace_back(lam_[i], 0.0);
      d.J.push_back(jump_mixed(t, x, lam_[i], Kp_[i][j], Km_[i][j], pr_.profile()));
    }
    return d;
  }

  /// max |(K+)^-1 K- - (S+)^-1 (w+)^-1 w- S-| at x = 0 (consistency of the two paths).
  double origin_consistency() const {
    double e = 0.0;
    for (std::size_t i = 0; i < lam_.size(); ++i) {
      const auto Kp = k_solve(pr_, lam_[i], s_plus(table_.r_plus[i]), +1, {0.0})[0];
      const auto Km = k_solve(pr_, lam_[i], s_minus(table_.r_bar_minus[i]), -1, {0.0})[0];
      const Mat2 ref = inv2(s_plus(table_.r_plus[i])) * inv2(wp0_[i]) * wm0_[i] *
                       s_minus(table_.r_bar_minus[i]);
      e = std::max(e, max_abs(inv2(Kp) * Km - ref));
    }
    return e;
  }

 private:
  SpectralProblem pr_;
  std::vector<double> lam_, xs_;
  std::vector<Mat2> phi0_, wp0_, wm0_;
  SpectralTable table_;
  std::vector<std::vector<Mat2>> Kp_, Km_;
};

}  // namespace mbrh
