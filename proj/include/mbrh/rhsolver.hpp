// rhsolver.hpp - singular-integral-equation solver for M- = M+ J on a
// discretised contour, field and medium reconstruction, and the closed-form
// pure-soliton solution.
#pragma once

#include "mbrh/contour.hpp"
#include "mbrh/jump.hpp"

namespace mbrh {

struct RHResult {
  double t = 0.0, x = 0.0;
  std::vector<Mat2> P;   // M+ at the nodes
  Mat2 m = Mat2::Zero(); // M = I + m/z + O(z^-2)
  cplx E = 0.0;          // -4 i m12
  cplx E_moment = 0.0;   // -(2/pi) int (P (J - I))12 ds, same quantity written as a moment
  double residual = 0.0; // ||A q - R|| / ||R||
  double cond = 1.0;
  double antihermitian_error = 0.0;  // |m21 + conj(m12)|
};

/// Dense Nystrom solver for Q - C+[Q (I - J)] = C+[I - J], Q = M+ - I. The
/// Cauchy matrix depends only on the contour and is built once.
class SieSolver {
 public:
  explicit SieSolver(ContourSigma c, int panel_order = 0)
      : c_(std::move(c)),
        rule_(panel_order > 0 ? panel_order : default_order(c_)),
        W_(cauchy_plus_matrix(c_, rule_)),
        z_(c_.nodes()),
        w_(c_.weights()) {
    if (c_.size() == 0) throw Error(ErrorCode::EmptyContour, "contour has no nodes");
  }

  const ContourSigma& contour() const { return c_; }
  const PanelRule& rule() const { return rule_; }
  const Eigen::MatrixXcd& cauchy_matrix() const { return W_; }

  RHResult solve(const JumpData& d) const {
    const std::size_t N = z_.size();
    if (d.J.size() != N) throw Error(ErrorCode::InvalidArgument, "jump table does not match contour");
    if (d.cls != ProblemClass::AmplifierOval) {
      bool any_real = false;
      for (cplx z : d.nodes) any_real = any_real || z.imag() == 0.0;
      if (any_real && !(posdef_check(d) > 0.0))
        throw Error(ErrorCode::PosdefViolated, "Re J is not positive definite on the real axis");
    }
    // rows of Q decouple: q^a_i - sum_k W_ik q^a_k (I - J_k) = sum_k W_ik (I - J_k)_{a,.}
    const Eigen::Index n2 = static_cast<Eigen::Index>(2 * N);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n2, n2);
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(n2, 2);
    std::vector<Mat2> D(N);
    for (std::size_t k = 0; k < N; ++k) D[k] = identity2() - d.J[k];
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx w = W_(i, k);
        for (int b = 0; b < 2; ++b) {
          for (int cc = 0; cc < 2; ++cc) A(2 * i + b, 2 * k + cc) -= w * D[k](cc, b);
          R(2 * i + b, 0) += w * D[k](0, b);
          R(2 * i + b, 1) += w * D[k](1, b);
        }
      }
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    RHResult r;
    r.t = d.t;
    r.x = d.x;
    r.cond = 1.0 / lu.rcond();
    if (!(r.cond <= 1e12))
      throw Error(ErrorCode::IllConditioned, "SIE condition estimate " + std::to_string(r.cond));
    const Eigen::MatrixXcd q = lu.solve(R);
    const double rn = R.norm();
    r.residual = rn > 0.0 ? (A * q - R).norm() / rn : (A * q - R).norm();
    if (r.residual > 1e-10)
      throw Error(ErrorCode::IllConditioned, "SIE residual " + std::to_string(r.residual));
    r.P.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      Mat2 Q;
      Q << q(2 * i, 0), q(2 * i + 1, 0), q(2 * i, 1), q(2 * i + 1, 1);
      r.P[i] = identity2() + Q;
    }
    reconstruct_field(r, d);
    return r;
  }

  /// m = (1/2 pi i) sum w P (J - I); E = -4 i m12.
  void reconstruct_field(RHResult& r, const JumpData& d) const {
    Mat2 s = Mat2::Zero();
    for (std::size_t k = 0; k < z_.size(); ++k) s += w_[k] * r.P[k] * (d.J[k] - identity2());
    r.m = s / (2.0 * pi * I_unit);
    r.E = -4.0 * I_unit * r.m(0, 1);
    r.E_moment = -(2.0 / pi) * s(0, 1);
    r.antihermitian_error = std::abs(r.m(1, 0) + std::conj(r.m(0, 1)));
  }

  /// M(z) = I + C[P (I - J)](z); real-axis targets on a panel need side = +-1.
  Mat2 evaluate_M(const RHResult& r, const JumpData& d, cplx z, int side = 0) const {
    const Eigen::VectorXcd row = cauchy_row(c_, rule_, z, side);
    Mat2 M = identity2();
    for (std::size_t k = 0; k < z_.size(); ++k) M += row(k) * r.P[k] * (identity2() - d.J[k]);
    return M;
  }

  /// Boundary values M+-(lambda) on the real axis: node values when lambda is a
  /// node, one-sided Cauchy limits on a panel, M(lambda) off the contour.
  std::pair<Mat2, Mat2> boundary_values(const RHResult& r, const JumpData& d,
                                        double lambda) const {
    for (std::size_t k = 0; k < z_.size(); ++k)
      if (z_[k].imag() == 0.0 && std::abs(z_[k].real() - lambda) < 1e-14 * (1.0 + std::abs(lambda)))
        return {r.P[k], r.P[k] * d.J[k]};
    for (const Panel& p : c_.panels)
      if (p.kind == PanelKind::RealSegment && lambda > p.a && lambda < p.b)
        return {evaluate_M(r, d, lambda, +1), evaluate_M(r, d, lambda, -1)};
    const Mat2 M = evaluate_M(r, d, lambda);
    return {M, M};
  }

 private:
  static int default_order(const ContourSigma& c) {
    for (const Panel& p : c.panels)
      if (p.kind == PanelKind::RealSegment) return static_cast<int>(p.nodes.size());
    return 16;
  }

  ContourSigma c_;
  PanelRule rule_;
  Eigen::MatrixXcd W_;
  std::vector<cplx> z_, w_;
};

/// One-shot convenience wrapper.
inline RHResult sie_solve(const ContourSigma& c, const JumpData& d) { return SieSolver(c).solve(d); }

/// Whole-line jump from a reflection coefficient r(lambda) on the real nodes.
inline JumpData contour_jump_wholeline(const ContourSigma& c,
                                       const std::function<cplx(double)>& r, double t, double x,
                                       const BroadeningProfile& p) {
  JumpData d;
  d.cls = ProblemClass::WholeLine;
  d.t = t;
  d.x = x;
  for (const Panel& pn : c.panels)
    for (cplx z : pn.nodes) {
      d.nodes.push_back(z);
      d.J.push_back(pn.kind == PanelKind::RealSegment ? jump_wholeline(t, x, z.real(), r(z.real()), p)
                                                     : identity2());
    }
  return d;
}

// ---------------------------------------------------------------------------
// Pure solitons

/// Discrete datum: zero z_j of a in the upper half-plane with norming constant m_j.
struct SolitonPole {
  cplx z;
  cplx m;
};

/// c_j = m_j exp(-2 i (z_j t - x eta(z_j))); the conjugate constant is -conj(c_j).
inline cplx residue_constant(const SolitonPole& s, double t, double x, const BroadeningProfile& p) {
  return s.m * std::exp(-2.0 * I_unit * (s.z * t - x * eta_eval(p, s.z)));
}

/// Pole at z = i nu whose |E| peak crosses x = 0 at time t0.
inline SolitonPole soliton_pole(double nu, double t0, double phase = 0.0) {
  return {cplx(0.0, nu), std::polar(2.0 * nu * std::exp(-2.0 * nu * t0), phase)};
}

struct SolitonSolution {
  std::vector<SolitonPole> poles;
  std::vector<Vec2> a;  // second column of res M at z_j
  std::vector<Vec2> b;  // first column of res M at conj(z_j)
  cplx E = 0.0;
  double cond = 1.0;

  Mat2 M(cplx z) const {
    Mat2 r = identity2();
    for (std::size_t j = 0; j < poles.size(); ++j) {
      r.col(1) += a[j] / (z - poles[j].z);
      r.col(0) += b[j] / (z - std::conj(poles[j].z));
    }
    return r;
  }
};

/// Closed-form reflectionless solution from the 2p x 2p residue system
///   a_j - c_j sum_k b_k/(z_j - z_k*) = c_j e1,  b_j - cb_j sum_k a_k/(z_j* - z_k) = cb_j e2.
inline SolitonSolution soliton_closed_form(const std::vector<SolitonPole>& poles, double t, double x,
                                           const BroadeningProfile& p) {
  SolitonSolution s;
  s.poles = poles;
  const Eigen::Index n = static_cast<Eigen::Index>(poles.size());
  if (n == 0) return s;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(2 * n, 2);
  std::vector<cplx> c(n), cb(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(poles[j].z.imag() > 0.0))
      throw Error(ErrorCode::InvalidArgument, "soliton poles must lie in the upper half-plane");
    c[j] = residue_constant(poles[j], t, x, p);
    cb[j] = -std::conj(c[j]);
    for (Eigen::Index k = 0; k < j; ++k)
      if (std::abs(poles[j].z - poles[k].z) < 1e-12)
        throw Error(ErrorCode::SingularResidueSystem, "coincident soliton poles");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      A(j, n + k) -= c[j] / (poles[j].z - std::conj(poles[k].z));
      A(n + j, k) -= cb[j] / (std::conj(poles[j].z) - poles[k].z);
    }
    R(j, 0) = c[j];
    R(n + j, 1) = cb[j];
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  s.cond = 1.0 / lu.rcond();
  if (!std::isfinite(s.cond) || s.cond > 1e14)
    throw Error(ErrorCode::SingularResidueSystem, "residue system is singular");
  const Eigen::MatrixXcd q = lu.solve(R);
  s.a.resize(n);
  s.b.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s.a[j] = Vec2(q(j, 0), q(j, 1));
    s.b[j] = Vec2(q(n + j, 0), q(n + j, 1));
    s.E += -4.0 * I_unit * s.a[j](0);
  }
  return s;
}

/// Clockwise circles around every pole and its conjugate.
inline std::vector<ContourConfig::Circle> soliton_circles(const std::vector<SolitonPole>& poles,
                                                          double radius, int nodes) {
  std::vector<ContourConfig::Circle> out;
  for (const SolitonPole& s : poles) {
    out.push_back({s.z, radius, nodes});
    out.push_back({std::conj(s.z), radius, nodes});
  }
  return out;
}

/// Jumps on the pole circles ([[1, -c/(z - z_j)], [0, 1]] around z_j and
/// [[1, 0], [-cb/(z - z_j*), 1]] around z_j*); real panels carry the
/// whole-line jump from r, or I when r is empty.
inline JumpData soliton_jump(const ContourSigma& c, const std::vector<SolitonPole>& poles,
                             double t, double x, const BroadeningProfile& p,
                             const std::function<cplx(double)>& r = {}) {
  JumpData d;
  d.cls = ProblemClass::WholeLine;
  d.t = t;
  d.x = x;
  for (const Panel& pn : c.panels) {
    int which = -1;
    bool upper = true;
    if (pn.kind == PanelKind::Circle)
      for (std::size_t j = 0; j < poles.size(); ++j) {
        if (std::abs(pn.center - poles[j].z) < 1e-12) which = static_cast<int>(j), upper = true;
        if (std::abs(pn.center - std::conj(poles[j].z)) < 1e-12) which = static_cast<int>(j), upper = false;
      }
    const cplx cj = which >= 0 ? residue_constant(poles[which], t, x, p) : cplx(0.0);
    for (cplx z : pn.nodes) {
      d.nodes.push_back(z);
      if (pn.kind == PanelKind::RealSegment) {
        d.J.push_back(r ? jump_wholeline(t, x, z.real(), r(z.real()), p) : identity2());
      } else if (which < 0) {
        d.J.push_back(identity2());
      } else if (upper) {
        d.J.push_back(make_mat(1.0, -cj / (z - poles[which].z), 0.0, 1.0));
      } else {
        d.J.push_back(make_mat(1.0, 0.0, std::conj(cj) / (z - std::conj(poles[which].z)), 1.0));
      }
    }
  }
  return d;
}

/// Mixed-problem jump: J from the table on the real nodes (the table's
/// lambdas must be those nodes) and the residue jumps on pole circles.
inline JumpData contour_jump(const ContourSigma& c, const MixedJumpTable& tab, double t, double x,
                             const std::vector<SolitonPole>& poles = {}) {
  const JumpData real = tab.jump(t, x);
  JumpData d = soliton_jump(c, poles, t, x, tab.problem().profile());
  d.cls = ProblemClass::Mixed;
  std::size_t i = 0, n = 0;
  for (const Panel& p : c.panels)
    for (cplx z : p.nodes) {
      if (p.kind == PanelKind::RealSegment) {
        if (i >= real.J.size() || std::abs(real.nodes[i] - z) > 1e-12)
          throw Error(ErrorCode::InvalidArgument, "jump table lambdas differ from contour nodes");
        d.J[n] = real.J[i++];
      }
      ++n;
    }
  return d;
}

/// Discrete data of a spectral table as soliton poles.
inline std::vector<SolitonPole> table_poles(const SpectralTable& t) {
  std::vector<SolitonPole> out;
  for (const Pole& p : t.poles) out.push_back({p.z, p.m});
  return out;
}

// ---------------------------------------------------------------------------
// Medium reconstruction

/// F from the jump of Phi_x Phi^-1 across the axis, with Phi = M exp(-i(z t - x eta) sigma3):
///   (pi n / 2) F = [M_x M^-1 + i eta M sigma3 M^-1]_+ - [..]_-.
/// Boundary values are given at x - h, x, x + h (central difference in x).
inline Mat2 medium_from_boundary(const std::array<std::pair<Mat2, Mat2>, 3>& Mb, double h,
                                 double lambda, const BroadeningProfile& p) {
  const double n = p.density(lambda);
  if (std::abs(n) < 1e-12)
    throw Error(ErrorCode::WeightVanishes, "n(lambda) vanishes at lambda = " + std::to_string(lambda));
  const EtaValues v = eta_boundary(p, lambda);
  auto part = [&](bool plus) {
    const Mat2& M = plus ? Mb[1].first : Mb[1].second;
    const Mat2 Mx = ((plus ? Mb[2].first : Mb[2].second) - (plus ? Mb[0].first : Mb[0].second)) /
                    (2.0 * h);
    const Mat2 Mi = inv2(M);
    const cplx eta = plus ? v.eta_plus : v.eta_minus;
    return Mat2(Mx * Mi + I_unit * eta * M * sigma3() * Mi);
  };
  return (2.0 / (pi * n)) * (part(true) - part(false));
}

/// F(t, x, lambda) from three SIE solves at x - h, x, x + h.
inline Mat2 reconstruct_F(const SieSolver& solver, const std::array<RHResult, 3>& r,
                          const std::array<JumpData, 3>& d, double h, double lambda,
                          const BroadeningProfile& p) {
  std::array<std::pair<Mat2, Mat2>, 3> Mb;
  for (int k = 0; k < 3; ++k) Mb[k] = solver.boundary_values(r[k], d[k], lambda);
  return medium_from_boundary(Mb, h, lambda, p);
}

/// Hermitian-traceless defect and |N^2 + |rho|^2 - 1| of a medium matrix.
struct MediumCertificate {
  double hermitian_traceless = 0.0;
  double conservation = 0.0;
};

inline MediumCertificate certify_medium(const Mat2& F) {
  MediumCertificate c;
  const Mat2 herm = F - F.adjoint();
  c.hermitian_traceless = std::max(max_abs(herm), std::abs(F.trace()));
  const double N = 0.5 * (F(0, 0) - F(1, 1)).real();
  c.conservation = std::abs(N * N + std::norm(0.5 * (F(0, 1) + std::conj(F(1, 0)))) - 1.0);
  return c;
}

}  // namespace mbrh
