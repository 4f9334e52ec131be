// contour.hpp - discretised conjugation contour (real-line Gauss-Legendre
// panels, closed curves with periodic trapezoid nodes) and the discrete
// Cauchy operator C[f](z) = (1/2 pi i) int f(s)/(s - z) ds on it.
#pragma once

#include "mbrh/broadening.hpp"

#include <Eigen/Dense>

#include <functional>

namespace mbrh {

enum class PanelKind { RealSegment, Circle, Oval };

/// One piece of the contour. The + side is on the left of the orientation:
/// the upper half-plane for real segments, the exterior of clockwise curves.
struct Panel {
  PanelKind kind = PanelKind::RealSegment;
  int orientation = 1;          // +1 left-to-right / counter-clockwise, -1 clockwise
  std::vector<cplx> nodes;
  std::vector<cplx> weights;    // dz weights
  std::vector<cplx> dzds;       // closed curves: dz/ds at the nodes
  double a = 0.0, b = 0.0;      // real segment ends
  cplx center = 0.0;            // closed curves
  double radius = 0.0;          // circles (mean radius for ovals)
};

struct ContourSigma {
  std::vector<Panel> panels;
  double window_min = 0.0, window_max = 0.0;

  std::size_t size() const {
    std::size_t n = 0;
    for (const Panel& p : panels) n += p.nodes.size();
    return n;
  }
  std::vector<cplx> nodes() const {
    std::vector<cplx> z;
    for (const Panel& p : panels) z.insert(z.end(), p.nodes.begin(), p.nodes.end());
    return z;
  }
  std::vector<cplx> weights() const {
    std::vector<cplx> w;
    for (const Panel& p : panels) w.insert(w.end(), p.weights.begin(), p.weights.end());
    return w;
  }
  /// Real parts of the real-segment nodes, in contour order.
  std::vector<double> real_nodes() const {
    std::vector<double> r;
    for (const Panel& p : panels)
      if (p.kind == PanelKind::RealSegment)
        for (cplx z : p.nodes) r.push_back(z.real());
    return r;
  }
  /// Multiset of non-real nodes equals its conjugate.
  bool conjugation_closed(double tol = 1e-12) const {
    const auto z = nodes();
    for (cplx a : z) {
      if (a.imag() == 0.0) continue;
      bool found = false;
      for (cplx b : z)
        if (std::abs(b - std::conj(a)) < tol * (1.0 + std::abs(a))) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  }
};

struct ContourConfig {
  double window_min = -20.0, window_max = 20.0;
  int panels = 24;
  int nodes_per_panel = 16;
  /// Optional weight g(lambda) >= 0; panel breakpoints equidistribute 1 + g.
  std::function<double(double)> panel_weight;
  /// Clockwise circles (center, radius, node count), e.g. around poles.
  struct Circle {
    cplx center;
    double radius;
    int nodes;
  };
  std::vector<Circle> circles;
  int oval_nodes = 64;
};

namespace detail {

inline Panel real_panel(double a, double b, const GaussRule& g) {
  Panel p;
  p.kind = PanelKind::RealSegment;
  p.a = a;
  p.b = b;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    p.nodes.emplace_back(c + h * g.nodes[k], 0.0);
    p.weights.emplace_back(h * g.weights[k], 0.0);
  }
  return p;
}

/// Closed curve z(s) = c + r(s) exp(i sigma s), s_k = 2 pi (k + 1/2)/n, so no
/// node sits on the real axis when c is real.
inline Panel closed_panel(PanelKind kind, cplx c, const std::vector<double>& r,
                          const std::vector<double>& dr, int orientation) {
  Panel p;
  p.kind = kind;
  p.orientation = orientation;
  p.center = c;
  const int n = static_cast<int>(r.size());
  double mean = 0.0;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * pi * (k + 0.5) / n;
    const cplx e = std::polar(1.0, orientation * s);
    p.nodes.push_back(c + r[k] * e);
    const cplx d = (dr[k] + I_unit * static_cast<double>(orientation) * r[k]) * e;
    p.dzds.push_back(d);
    p.weights.push_back(d * (2.0 * pi / n));
    mean += r[k] / n;
  }
  p.radius = mean;
  return p;
}

/// Periodic spectral differentiation matrix on n equispaced nodes (n even).
inline Eigen::MatrixXd periodic_diff_matrix(int n) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  const double h = 2.0 * pi / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        const double sgn = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        D(i, j) = 0.5 * sgn / std::tan(0.5 * (i - j) * h);
      }
  return D;
}

}  // namespace detail

inline Panel circle_panel(cplx center, double radius, int nodes, int orientation = -1) {
  if (nodes < 4 || nodes % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "circle needs an even node count >= 4");
  return detail::closed_panel(PanelKind::Circle, center, std::vector<double>(nodes, radius),
                              std::vector<double>(nodes, 0.0), orientation);
}

/// Closed clockwise oval {Im eta = 0} around `center`: along each ray the
/// radius is the root of Im eta(c + r e^{i s}) / Im(e^{i s}) = 0 bracketed in
/// (r_min, r_max). Experimental (amplifier class).
inline Panel oval_panel(const BroadeningProfile& p, double center, int nodes, double r_min,
                        double r_max) {
  if (nodes < 4 || nodes % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "oval needs an even node count >= 4");
  std::vector<double> r(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double s = -2.0 * pi * (k + 0.5) / nodes;  // clockwise
    const cplx e = std::polar(1.0, s);
    auto f = [&](double rr) {
      const cplx z = center + rr * e;
      return eta_eval(p, z).imag() / z.imag();
    };
    double lo = r_min, hi = r_max, flo = f(lo);
    if ((flo < 0.0) == (f(hi) < 0.0))
      throw Error(ErrorCode::EmptyContour, "oval radius not bracketed on a ray");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double m = 0.5 * (lo + hi);
      const double fm = f(m);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = m;
        flo = fm;
      } else {
        hi = m;
      }
    }
    r[k] = 0.5 * (lo + hi);
  }
  const Eigen::MatrixXd D = detail::periodic_diff_matrix(nodes);
  const Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), nodes);
  const Eigen::VectorXd drv = D * rv;
  // parameter s runs clockwise; closed_panel's s runs with sigma = -1, so dr/ds flips
  std::vector<double> dr(nodes);
  for (int k = 0; k < nodes; ++k) dr[k] = drv(k);
  return detail::closed_panel(PanelKind::Oval, center, r, dr, -1);
}

/// Real line truncated to the window in Gauss-Legendre panels (breakpoints
/// equidistribute 1 + panel_weight), plus the configured circles; ovals for
/// amplifiers are added by the caller via oval_panel.
inline ContourSigma contour_build(const ContourConfig& cfg) {
  ContourSigma c;
  c.window_min = cfg.window_min;
  c.window_max = cfg.window_max;
  if (cfg.panels > 0) {
    if (!(cfg.window_max > cfg.window_min) || cfg.nodes_per_panel < 2)
      throw Error(ErrorCode::InvalidArgument, "invalid real-line window");
    const GaussRule g = gauss_legendre(cfg.nodes_per_panel);
    std::vector<double> br(cfg.panels + 1);
    if (cfg.panel_weight) {
      const int m = 4000;
      std::vector<double> cdf(m + 1, 0.0), xs(m + 1);
      for (int i = 0; i <= m; ++i) xs[i] = cfg.window_min + (cfg.window_max - cfg.window_min) * i / m;
      for (int i = 1; i <= m; ++i) {
        const double g0 = 1.0 + cfg.panel_weight(xs[i - 1]), g1 = 1.0 + cfg.panel_weight(xs[i]);
        cdf[i] = cdf[i - 1] + 0.5 * (g0 + g1) * (xs[i] - xs[i - 1]);
      }
      for (int k = 0; k <= cfg.panels; ++k) {
        const double target = cdf[m] * k / cfg.panels;
        const std::size_t i = std::min<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), target) - cdf.begin(), m);
        if (i == 0) {
          br[k] = xs[0];
        } else {
          const double u = (target - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
          br[k] = xs[i - 1] + u * (xs[i] - xs[i - 1]);
        }
      }
      br.front() = cfg.window_min;
      br.back() = cfg.window_max;
    } else {
      for (int k = 0; k <= cfg.panels; ++k)
        br[k] = cfg.window_min + (cfg.window_max - cfg.window_min) * k / cfg.panels;
    }
    for (int k = 0; k < cfg.panels; ++k) c.panels.push_back(detail::real_panel(br[k], br[k + 1], g));
  }
  for (const auto& ci : cfg.circles) c.panels.push_back(circle_panel(ci.center, ci.radius, ci.nodes));
  if (c.panels.empty()) throw Error(ErrorCode::EmptyContour, "contour has no panels");
  return c;
}

// ---------------------------------------------------------------------------
// Discrete Cauchy operator

/// Precomputed product-integration data for Gauss-Legendre panels of a given
/// order: LU of the transposed Vandermonde matrix of the reference nodes.
class PanelRule {
 public:
  explicit PanelRule(int n) : n_(n), g_(gauss_legendre(n)) {
    Eigen::MatrixXd Vt(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) Vt(k, j) = std::pow(g_.nodes[j], k);
    lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(Vt);
  }
  int order() const { return n_; }

  /// Weights omega_j with sum_j omega_j f(u_j) ~ int_{-1}^{1} f(u)/(u - zeta) du for
  /// the polynomial interpolant of f. For zeta on (-1, 1) with side = +1/-1 the
  /// boundary value from above/below is returned.
  Eigen::VectorXcd weights(cplx zeta, int side = 0) const {
    Eigen::VectorXcd p(n_);
    cplx p0;
    if (zeta.imag() == 0.0 && std::abs(zeta.real()) < 1.0) {
      if (side == 0) throw Error(ErrorCode::TooCloseToContour, "on-panel target needs a side");
      const double u = zeta.real();
      p0 = std::log((1.0 - u) / (1.0 + u)) + static_cast<double>(side) * I_unit * pi;
    } else {
      p0 = std::log((1.0 - zeta) / (-1.0 - zeta));
    }
    p(0) = p0;
    for (int k = 1; k < n_; ++k)
      p(k) = zeta * p(k - 1) + (k % 2 == 1 ? 2.0 / k : 0.0);
    return lu_.solve(p.real()).cast<cplx>() + I_unit * lu_.solve(p.imag()).cast<cplx>();
  }

  /// Product integration is used inside the Bernstein ellipse |z-1| + |z+1| < 4.
  static bool near(cplx zeta) { return std::abs(zeta - 1.0) + std::abs(zeta + 1.0) < 4.0; }

 private:
  int n_;
  GaussRule g_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Row of the discrete Cauchy operator for a target z: C[f](z) ~ sum_k W_k f_k.
/// Real-axis targets on a real panel need side = +1/-1.
inline Eigen::VectorXcd cauchy_row(const ContourSigma& c, const PanelRule& rule, cplx z,
                                   int side = 0) {
  Eigen::VectorXcd w(c.size());
  const cplx k2pi = 1.0 / (2.0 * pi * I_unit);
  std::size_t off = 0;
  for (const Panel& p : c.panels) {
    const std::size_t n = p.nodes.size();
    bool done = false;
    if (p.kind == PanelKind::RealSegment && static_cast<int>(n) == rule.order()) {
      const double cm = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
      const cplx zeta = (z - cm) / h;
      if (PanelRule::near(zeta)) {
        const Eigen::VectorXcd om = rule.weights(zeta, side);
        for (std::size_t j = 0; j < n; ++j) w(off + j) = k2pi * om(j);
        done = true;
      }
    } else if (p.kind != PanelKind::RealSegment) {
      double dmin = std::numeric_limits<double>::infinity();
      for (cplx s : p.nodes) dmin = std::min(dmin, std::abs(s - z));
      const double spacing = 2.0 * pi * p.radius / n;
      if (dmin < 0.5 * spacing)
        throw Error(ErrorCode::TooCloseToContour, "target too close to a closed panel");
    }
    if (!done)
      for (std::size_t j = 0; j < n; ++j) w(off + j) = k2pi * p.weights[j] / (p.nodes[j] - z);
    off += n;
  }
  return w;
}

/// Plus-side Cauchy matrix W with (C+ f)(z_i) ~ sum_k W_ik f_k at every node.
inline Eigen::MatrixXcd cauchy_plus_matrix(const ContourSigma& c, const PanelRule& rule) {
  const std::size_t N = c.size();
  const auto z = c.nodes();
  Eigen::MatrixXcd W(N, N);
  const cplx k2pi = 1.0 / (2.0 * pi * I_unit);
  std::size_t off_t = 0;
  for (const Panel& pt : c.panels) {
    const std::size_t nt = pt.nodes.size();
    for (std::size_t i = 0; i < nt; ++i) {
      const std::size_t row = off_t + i;
      std::size_t off_s = 0;
      for (const Panel& ps : c.panels) {
        const std::size_t ns = ps.nodes.size();
        const bool self = &ps == &pt;
        if (ps.kind == PanelKind::RealSegment) {
          const double cm = 0.5 * (ps.a + ps.b), h = 0.5 * (ps.b - ps.a);
          const cplx zeta = (z[row] - cm) / h;
          if (static_cast<int>(ns) == rule.order() && (self || PanelRule::near(zeta))) {
            const Eigen::VectorXcd om = rule.weights(self ? cplx(zeta.real(), 0.0) : zeta, +1);
            for (std::size_t j = 0; j < ns; ++j) W(row, off_s + j) = k2pi * om(j);
          } else {
            for (std::size_t j = 0; j < ns; ++j)
              W(row, off_s + j) = k2pi * ps.weights[j] / (ps.nodes[j] - z[row]);
          }
        } else if (self) {
          // subtraction: sum_{k != i} a_k (f_k - f_i) + (1/(i n)) (D f)_i + [ccw] f_i
          static thread_local std::pair<int, Eigen::MatrixXd> Dcache{0, {}};
          if (Dcache.first != static_cast<int>(ns))
            Dcache = {static_cast<int>(ns), detail::periodic_diff_matrix(static_cast<int>(ns))};
          const Eigen::MatrixXd& D = Dcache.second;
          cplx diag = ps.orientation > 0 ? 1.0 : 0.0;
          for (std::size_t j = 0; j < ns; ++j) {
            if (j == i) continue;
            const cplx a = k2pi * ps.weights[j] / (ps.nodes[j] - ps.nodes[i]);
            W(row, off_s + j) = a + D(i, j) / (I_unit * static_cast<double>(ns));
            diag -= a;
          }
          W(row, off_s + i) = diag;
        } else {
          for (std::size_t j = 0; j < ns; ++j)
            W(row, off_s + j) = k2pi * ps.weights[j] / (ps.nodes[j] - z[row]);
        }
        off_s += ns;
      }
    }
    off_t += nt;
  }
  return W;
}

}  // namespace mbrh
