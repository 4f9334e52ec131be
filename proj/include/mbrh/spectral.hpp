// spectral.hpp - Jost solutions of the t- and x(+-)-equations, transition
// matrices, reflection coefficients and the zeros of a(z) with residue data.
#pragma once

#include "mbrh/lax.hpp"
#include "mbrh/ode.hpp"
#include "mbrh/scenario.hpp"

#include <optional>

namespace mbrh {

struct SpectralOptions {
  double ode_step = 0.01;   // Magnus step in t and x
  int lambda_nodes = 200;   // nodes of the profile-adapted lambda rule
};

/// Scenario + profile with the initial medium pre-sampled at the Magnus nodes
/// of the backward x-integration (shared by every lambda).
class SpectralProblem {
 public:
  SpectralProblem(ScenarioData sc, BroadeningProfile p, SpectralOptions o = {})
      : sc_(std::move(sc)), p_(std::move(p)), o_(o) {
    quad_ = lambda_quadrature(p_, o_.lambda_nodes);
    for (std::size_t k = 0; k < quad_.size(); ++k)
      if (std::abs(sc_.rho0(sc_.L, quad_.nodes[k])) > 1e-8)
        throw Error(ErrorCode::MediumNotAsymptotic, "rho0 does not vanish at x = L");
    nx_ = std::max(1, static_cast<int>(std::ceil(sc_.L / o_.ode_step - 1e-9)));
    hx_ = -sc_.L / nx_;
    nt_ = std::max(1, static_cast<int>(std::ceil(sc_.T / o_.ode_step - 1e-9)));
    ht_ = -sc_.T / nt_;
    nodes_.reserve(2 * nx_);
    for (int k = 0; k < nx_; ++k) {
      const double x0 = sc_.L + k * hx_;
      for (double c : {kMagnusNode1, kMagnusNode2}) nodes_.push_back(sample(x0 + c * hx_));
    }
  }

  const ScenarioData& scenario() const { return sc_; }
  const BroadeningProfile& profile() const { return p_; }
  const SpectralOptions& options() const { return o_; }
  const LambdaQuadrature& quad() const { return quad_; }
  bool trivial_medium() const { return trivial_medium_; }

  /// Phi(0, z): t-equation integrated from t = T with Phi(T) = exp(-i z T sigma3).
  Mat2 phi0(cplx z) const {
    const double T = sc_.T;
    auto A = [&](double t) { return Mat2(-I_unit * z * sigma3() - coupling_matrix(sc_.E_in(t))); };
    Mat2 y = exp_sigma3(-z * T);
    for (int k = 0; k < nt_; ++k) {
      y = magnus4_step(A, T + k * ht_, ht_) * y;
      if (!y.allFinite()) throw Error(ErrorCode::ODEStepRejected, "non-finite t-integration");
    }
    return y;
  }

  /// w(x_k, z) for the x-equation with G taken off-axis (side = 0, Im z != 0)
  /// or as the boundary value of the given side. Returns w at x = L, L - h, ..., 0
  /// when `path` is non-null; always returns w(0).
  Mat2 w0(cplx z, int side, std::vector<Mat2>* path = nullptr) const {
    const cplx eta = eta_at(p_, z, side);
    Mat2 y = exp_sigma3(sc_.L * eta);
    if (path) {
      path->clear();
      path->push_back(y);
    }
    if (trivial_medium_) {
      // exact solution exp(i x eta sigma3)
      for (int k = 1; k <= nx_; ++k) {
        y = exp_sigma3((sc_.L + k * hx_) * eta);
        if (path) path->push_back(y);
      }
      return y;
    }
    const cplx g = z - eta;  // constant-F part of G in units of sigma3
    for (int k = 0; k < nx_; ++k) {
      const Mat2 a1 = generator(nodes_[2 * k], z, g);
      const Mat2 a2 = generator(nodes_[2 * k + 1], z, g);
      y = magnus4_propagator(a1, a2, hx_) * y;
      if (!y.allFinite()) throw Error(ErrorCode::ODEStepRejected, "non-finite x-integration");
      if (path) path->push_back(y);
    }
    return y;
  }

  /// x positions matching the `path` output of w0.
  std::vector<double> x_path() const {
    std::vector<double> xs;
    for (int k = 0; k <= nx_; ++k) xs.push_back(k == nx_ ? 0.0 : sc_.L + k * hx_);
    return xs;
  }

  /// Solution of the x-equation with terminal value y(L) = YL, returned at
  /// arbitrary points of [0, L]. Points between Magnus steps are reached by
  /// one extra partial step with freshly sampled medium data.
  std::vector<Mat2> propagate_to(cplx z, int side, const Mat2& YL,
                                 const std::vector<double>& xs) const {
    const cplx eta = eta_at(p_, z, side);
    std::vector<Mat2> out(xs.size());
    for (double x : xs)
      if (x < -1e-12 || x > sc_.L + 1e-12)
        throw Error(ErrorCode::InvalidArgument, "x outside [0, L]");
    if (trivial_medium_) {
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = exp_sigma3((xs[i] - sc_.L) * eta) * YL;
      return out;
    }
    const cplx g = z - eta;
    std::vector<Mat2> path{YL};
    Mat2 y = YL;
    for (int k = 0; k < nx_; ++k) {
      y = magnus4_propagator(generator(nodes_[2 * k], z, g), generator(nodes_[2 * k + 1], z, g),
                             hx_) * y;
      if (!y.allFinite()) throw Error(ErrorCode::ODEStepRejected, "non-finite x-integration");
      path.push_back(y);
    }
    const double h = -hx_;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const int k = std::clamp(static_cast<int>(std::floor((sc_.L - xs[i]) / h + 1e-9)), 0, nx_);
      const double xk = k == nx_ ? 0.0 : sc_.L - k * h;
      const double rest = xs[i] - xk;
      if (std::abs(rest) < 1e-13) {
        out[i] = path[k];
        continue;
      }
      const Mat2 a1 = generator(make_node(xk + kMagnusNode1 * rest), z, g);
      const Mat2 a2 = generator(make_node(xk + kMagnusNode2 * rest), z, g);
      out[i] = magnus4_propagator(a1, a2, rest) * path[k];
    }
    return out;
  }

  /// a(z) = alpha A - beta B, analytic in the upper half-plane for attenuators.
  cplx a(cplx z) const {
    const Mat2 P = phi0(z), W = w0(z, 0);
    return W(0, 0) * P(1, 1) - W(1, 0) * P(0, 1);
  }

  /// gamma = B(z) / alpha(z).
  cplx gamma(cplx z) const { return phi0(z)(0, 1) / w0(z, 0)(0, 0); }

 private:
  struct Node {
    double x;
    cplx E;
    MediumSlice slice;
  };

  Node make_node(double x) const {
    Node n{x, sc_.E0(x), MediumSlice::ground(quad_)};
    for (std::size_t k = 0; k < quad_.size(); ++k) {
      n.slice.rho[k] = sc_.rho0(x, quad_.nodes[k]);
      n.slice.N[k] = std::sqrt(std::max(0.0, 1.0 - std::norm(n.slice.rho[k])));
    }
    return n;
  }

  Node sample(double x) {
    Node n = make_node(x);
    if (n.E != 0.0) trivial_medium_ = false;
    for (cplx r : n.slice.rho)
      if (r != 0.0) trivial_medium_ = false;
    return n;
  }

  Mat2 generator(const Node& n, cplx z, cplx g) const {
    const double lr = z.real();
    const cplx r0 = sc_.rho0(n.x, lr);
    const Mat2 F0 = medium_matrix(std::sqrt(std::max(0.0, 1.0 - std::norm(r0))), r0);
    // G = (1/4) sum w (F - F0)/(s - z) + g F0, as in cauchy_transform_F
    Mat2 G = Mat2::Zero();
    for (std::size_t k = 0; k < quad_.size(); ++k) {
      const cplx d = quad_.nodes[k] - z;
      if (std::abs(d) < 1e-14) continue;
      G += (quad_.weights[k] / d) * (n.slice.F(k) - F0);
    }
    G = 0.25 * G + g * F0;
    return I_unit * z * sigma3() + coupling_matrix(n.E) - I_unit * G;
  }

  ScenarioData sc_;
  BroadeningProfile p_;
  SpectralOptions o_;
  LambdaQuadrature quad_;
  std::vector<Node> nodes_;
  int nx_ = 1, nt_ = 1;
  double hx_ = 0.0, ht_ = 0.0;
  bool trivial_medium_ = true;
};

struct Pole {
  cplx z;       // zero of a in the upper half-plane
  cplx gamma;   // B(z)/alpha(z)
  cplx adot;    // a'(z)
  cplx m;       // gamma / a'(z)
};

struct SpectralTable {
  std::vector<double> lambda;
  std::vector<Mat2> phi0, w_plus0, w_minus0, T_plus, T_minus;
  std::vector<cplx> a_plus, b_plus, a_bar_minus, b_bar_minus;
  std::vector<cplx> r_plus, r_bar_minus;
  std::vector<cplx> A, B, alpha_plus, beta_plus, alpha_minus, beta_minus;
  std::vector<Pole> poles;
  double det_error = 0.0;        // max |det T -+ 1|
  double reduction_error = 0.0;  // max deviation of T- from sigma2 T+* sigma2
};

struct JostPhiResult {
  std::vector<Mat2> phi0;
  std::vector<cplx> A, B;
};

/// Phi(0, lambda) with A = Phi_22, B = Phi_12 on a real grid.
inline JostPhiResult jost_phi(const SpectralProblem& pr, const std::vector<double>& grid) {
  const auto& sc = pr.scenario();
  double peak = 0.0;
  for (int i = 0; i <= 2000; ++i) peak = std::max(peak, std::abs(sc.E_in(sc.T * i / 2000.0)));
  if (std::abs(sc.E_in(sc.T)) > 1e-6 * peak)
    throw Error(ErrorCode::DecayViolation, "boundary pulse has not decayed at t = T");
  JostPhiResult r{std::vector<Mat2>(grid.size()), std::vector<cplx>(grid.size()),
                  std::vector<cplx>(grid.size())};
  parallel_for(grid.size(), [&](std::size_t i) {
    r.phi0[i] = pr.phi0(grid[i]);
    r.A[i] = r.phi0[i](1, 1);
    r.B[i] = r.phi0[i](0, 1);
  });
  return r;
}

/// w(+-)(0, lambda) on a real grid; bank = +1 or -1.
inline std::vector<Mat2> jost_w(const SpectralProblem& pr, const std::vector<double>& grid,
                                int bank) {
  if (bank != 1 && bank != -1) throw Error(ErrorCode::InvalidArgument, "bank must be +-1");
  std::vector<Mat2> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = pr.w0(grid[i], bank); });
  return out;
}

/// T(+-) = w(+-)(0)^-1 Phi(0) and the derived spectral functions.
inline SpectralTable transition_and_reflection(const std::vector<double>& grid,
                                               const std::vector<Mat2>& phi0,
                                               const std::vector<Mat2>& wp,
                                               const std::vector<Mat2>& wm) {
  const std::size_t n = grid.size();
  if (phi0.size() != n || wp.size() != n || wm.size() != n)
    throw Error(ErrorCode::InvalidArgument, "spectral inputs on different grids");
  SpectralTable t;
  t.lambda = grid;
  t.phi0 = phi0;
  t.w_plus0 = wp;
  t.w_minus0 = wm;
  for (std::size_t i = 0; i < n; ++i) {
    for (const Mat2* m : {&phi0[i], &wp[i], &wm[i]})
      if (std::abs(det2(*m) - 1.0) > 1e-6)
        throw Error(ErrorCode::InvariantError,
                    "Jost matrix not unimodular at lambda = " + std::to_string(grid[i]));
    const Mat2 Tp = inv2(wp[i]) * phi0[i];
    const Mat2 Tm = inv2(wm[i]) * phi0[i];
    t.T_plus.push_back(Tp);
    t.T_minus.push_back(Tm);
    t.a_plus.push_back(Tp(1, 1));
    t.b_plus.push_back(Tp(0, 1));
    t.a_bar_minus.push_back(Tm(0, 0));
    t.b_bar_minus.push_back(-Tm(1, 0));
    if (std::abs(Tp(1, 1)) < 1e-8)
      throw Error(ErrorCode::SpectralSingularity,
                  "a(lambda) vanishes on the real axis at " + std::to_string(grid[i]));
    if (std::abs(Tm(0, 0)) < 1e-8)
      throw Error(ErrorCode::SpectralSingularity,
                  "a-bar(lambda) vanishes on the real axis at " + std::to_string(grid[i]));
    t.r_plus.push_back(Tp(0, 1) / Tp(1, 1));
    t.r_bar_minus.push_back(-Tm(1, 0) / Tm(0, 0));
    t.A.push_back(phi0[i](1, 1));
    t.B.push_back(phi0[i](0, 1));
    t.alpha_plus.push_back(wp[i](0, 0));
    t.beta_plus.push_back(wp[i](1, 0));
    t.alpha_minus.push_back(wm[i](0, 0));
    t.beta_minus.push_back(wm[i](1, 0));
    t.det_error = std::max({t.det_error, std::abs(det2(Tp) - 1.0), std::abs(det2(Tm) - 1.0)});
    t.reduction_error = std::max(t.reduction_error, max_abs(Tm - sigma2_conj(Tp)));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Zeros of a(z)

struct Window {
  double re_min = -4.0, re_max = 4.0;
  double im_min = 1e-2, im_max = 4.0;
};

struct ZeroSearch {
  std::vector<Pole> poles;
  int winding = 0;
};

namespace detail {

/// Winding number of f around the rectangle, sampling each edge adaptively
/// until consecutive argument increments stay below 0.5 rad.
template <typename Fn>
int winding_number(Fn&& f, const Window& w, int base = 16) {
  const cplx c[4] = {{w.re_min, w.im_min}, {w.re_max, w.im_min}, {w.re_max, w.im_max},
                     {w.re_min, w.im_max}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx z0 = c[e], z1 = c[(e + 1) % 4];
    std::vector<std::pair<double, cplx>> pts;
    for (int i = 0; i <= base; ++i) {
      const double s = static_cast<double>(i) / base;
      pts.emplace_back(s, f(z0 + s * (z1 - z0)));
    }
    for (std::size_t i = 1; i < pts.size();) {
      const double d = std::arg(pts[i].second / pts[i - 1].second);
      if (std::abs(d) > 0.5 && pts[i].first - pts[i - 1].first > 1e-6) {
        const double s = 0.5 * (pts[i].first + pts[i - 1].first);
        pts.insert(pts.begin() + i, {s, f(z0 + s * (z1 - z0))});
        continue;
      }
      total += d;
      ++i;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

template <typename Fn>
cplx central_derivative(Fn&& f, cplx z) {
  const double h = 1e-5 * (1.0 + std::abs(z));
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

template <typename Fn>
void isolate_zeros(Fn&& f, const Window& w, int count, int depth, std::vector<cplx>& out) {
  if (count <= 0) return;
  if (count == 1 || depth >= 10) {
    cplx z(0.5 * (w.re_min + w.re_max), 0.5 * (w.im_min + w.im_max));
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const cplx dz = f(z) / central_derivative(f, z);
      z -= dz;
      if (!std::isfinite(std::abs(z))) break;
      if (std::abs(dz) < 1e-13 * (1.0 + std::abs(z))) {
        ok = true;
        break;
      }
    }
    const double mr = 1e-6 * (w.re_max - w.re_min), mi = 1e-6 * (w.im_max - w.im_min);
    const bool inside = z.real() >= w.re_min - mr && z.real() <= w.re_max + mr &&
                        z.imag() >= w.im_min - mi && z.imag() <= w.im_max + mi;
    if (ok && inside && count == 1) {
      out.push_back(z);
      return;
    }
    if (depth >= 10) {
      if (ok && inside) out.push_back(z);
      return;
    }
  }
  const double rm = 0.5 * (w.re_min + w.re_max), im = 0.5 * (w.im_min + w.im_max);
  const Window q[4] = {{w.re_min, rm, w.im_min, im}, {rm, w.re_max, w.im_min, im},
                       {w.re_min, rm, im, w.im_max}, {rm, w.re_max, im, w.im_max}};
  for (const Window& s : q) isolate_zeros(f, s, winding_number(f, s), depth + 1, out);
}

}  // namespace detail

/// Zeros of a(z) inside the window (attenuators only) with residue data
/// m = gamma / a'(z).
inline ZeroSearch locate_a_zeros(const SpectralProblem& pr, const Window& w = {}) {
  if (pr.profile().sign > 0)
    throw Error(ErrorCode::InvalidArgument, "zeros of a(z) are searched for attenuators only");
  if (w.im_min < 1e-3 || !(w.re_max > w.re_min) || !(w.im_max > w.im_min))
    throw Error(ErrorCode::InvalidArgument, "window must lie at least 1e-3 above the axis");
  auto f = [&](cplx z) { return pr.a(z); };
  ZeroSearch zs;
  zs.winding = detail::winding_number(f, w);
  std::vector<cplx> zeros;
  detail::isolate_zeros(f, w, zs.winding, 0, zeros);
  if (static_cast<int>(zeros.size()) != zs.winding)
    throw Error(ErrorCode::CountMismatch, "found " + std::to_string(zeros.size()) +
                                              " zeros, winding number " +
                                              std::to_string(zs.winding));
  for (cplx z : zeros) {
    Pole p;
    p.z = z;
    p.gamma = pr.gamma(z);
    p.adot = detail::central_derivative(f, z);
    p.m = p.gamma / p.adot;
    zs.poles.push_back(p);
  }
  return zs;
}

/// Full spectral pipeline on a real grid; zeros are searched when `window`
/// is given and the medium is an attenuator.
inline SpectralTable compute_spectral_table(const SpectralProblem& pr,
                                            const std::vector<double>& grid,
                                            const std::optional<Window>& window = {}) {
  const JostPhiResult phi = jost_phi(pr, grid);
  SpectralTable t =
      transition_and_reflection(grid, phi.phi0, jost_w(pr, grid, +1), jost_w(pr, grid, -1));
  if (window && pr.profile().sign < 0) t.poles = locate_a_zeros(pr, *window).poles;
  return t;
}

inline std::vector<double> uniform_grid(double a, double b, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "grid needs >= 2 points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1.0);
  return g;
}

}  // namespace mbrh
