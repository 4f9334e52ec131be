// broadening.hpp - inhomogeneous-broadening weight n(lambda), the sectionally
// analytic phase eta(z), its boundary values and the zero-level curve
// Im eta = 0 bounding the amplifier domains D+/D-.
#pragma once

#include "mbrh/core.hpp"
#include "mbrh/quadrature.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace mbrh {

enum class Shape { Rectangular, Lorentzian, DeltaApprox, Tabulated };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::Rectangular: return "rectangular";
    case Shape::Lorentzian: return "lorentzian";
    case Shape::DeltaApprox: return "delta_approx";
    case Shape::Tabulated: return "tabulated";
  }
  return "?";
}

/// n(lambda) = scale * base(lambda).
///   rectangular / delta_approx: base = 1 on |lambda| <= width
///   lorentzian:                  base = (l/pi) / (lambda^2 + l^2), l = width
///   tabulated:                   base = piecewise-linear interpolant of values
/// sign = -1 is an attenuator, +1 an amplifier. Omega is fixed to 1.
struct BroadeningProfile {
  Shape shape = Shape::Lorentzian;
  double width = 1.0;
  int sign = -1;
  double scale = -1.0;
  std::vector<double> grid;    // tabulated only, strictly increasing
  std::vector<double> values;  // tabulated only

  static BroadeningProfile rectangular(double eps, int sign) {
    return {Shape::Rectangular, eps, sign, sign / (2.0 * eps), {}, {}};
  }
  static BroadeningProfile delta_approx(double eps, int sign) {
    return {Shape::DeltaApprox, eps, sign, sign / (2.0 * eps), {}, {}};
  }
  static BroadeningProfile lorentzian(double l, int sign) {
    return {Shape::Lorentzian, l, sign, static_cast<double>(sign), {}, {}};
  }
  /// Raw table; call profile_normalize before use in the solvers.
  static BroadeningProfile tabulated(std::vector<double> grid, std::vector<double> values,
                                     int sign) {
    return {Shape::Tabulated, 0.0, sign, 1.0, std::move(grid), std::move(values)};
  }

  bool is_box() const { return shape == Shape::Rectangular || shape == Shape::DeltaApprox; }

  double density(double lambda) const {
    switch (shape) {
      case Shape::Rectangular:
      case Shape::DeltaApprox:
        return std::abs(lambda) <= width ? scale : 0.0;
      case Shape::Lorentzian:
        return scale * width / (pi * (lambda * lambda + width * width));
      case Shape::Tabulated: {
        if (grid.empty() || lambda < grid.front() || lambda > grid.back()) return 0.0;
        const auto it = std::upper_bound(grid.begin(), grid.end(), lambda);
        const std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - grid.begin(), 1),
                                                     grid.size() - 1);
        const double a = grid[k - 1], b = grid[k];
        const double s = (lambda - a) / (b - a);
        return scale * ((1.0 - s) * values[k - 1] + s * values[k]);
      }
    }
    return 0.0;
  }

  /// Closed interval outside which n vanishes (infinite for the Lorentzian).
  std::pair<double, double> support() const {
    switch (shape) {
      case Shape::Rectangular:
      case Shape::DeltaApprox:
        return {-width, width};
      case Shape::Lorentzian:
        return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
      case Shape::Tabulated:
        return {grid.front(), grid.back()};
    }
    return {0.0, 0.0};
  }

  /// Integral of n; exact for the closed forms, trapezoid for tables.
  double mass() const {
    switch (shape) {
      case Shape::Rectangular:
      case Shape::DeltaApprox:
        return scale * 2.0 * width;
      case Shape::Lorentzian:
        return scale;
      case Shape::Tabulated: {
        double m = 0.0;
        for (std::size_t k = 1; k < grid.size(); ++k)
          m += 0.5 * (values[k] + values[k - 1]) * (grid[k] - grid[k - 1]);
        return scale * m;
      }
    }
    return 0.0;
  }
};

/// Rescales the profile so that the integral of n equals sign.
inline BroadeningProfile profile_normalize(BroadeningProfile p) {
  if (p.sign != 1 && p.sign != -1)
    throw Error(ErrorCode::InvalidArgument, "profile sign must be +1 or -1");
  if (p.shape == Shape::Tabulated) {
    if (p.grid.size() < 2 || p.grid.size() != p.values.size())
      throw Error(ErrorCode::InvalidArgument, "tabulated profile needs >= 2 matching samples");
    double peak = 0.0;
    bool pos = false, neg = false;
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      if (!std::isfinite(p.values[k]) || !std::isfinite(p.grid[k]))
        throw Error(ErrorCode::InvalidArgument, "tabulated profile has non-finite entries");
      if (k > 0 && !(p.grid[k] > p.grid[k - 1]))
        throw Error(ErrorCode::InvalidArgument, "tabulated grid must be strictly increasing");
      peak = std::max(peak, std::abs(p.values[k]));
      pos |= p.values[k] > 0.0;
      neg |= p.values[k] < 0.0;
    }
    if (pos && neg) throw Error(ErrorCode::InvariantError, "tabulated profile changes sign");
    double abs_mass = 0.0;
    for (std::size_t k = 1; k < p.grid.size(); ++k)
      abs_mass += 0.5 * (std::abs(p.values[k]) + std::abs(p.values[k - 1])) *
                  (p.grid[k] - p.grid[k - 1]);
    if (abs_mass < 1e-14) throw Error(ErrorCode::ZeroMass, "profile has vanishing mass");
    if (std::abs(p.values.front()) > 1e-6 * peak || std::abs(p.values.back()) > 1e-6 * peak)
      throw Error(ErrorCode::NonDecaying, "tabulated profile does not decay at the grid ends");
    const double raw = p.mass() / p.scale;
    p.scale = p.sign / raw;
    return p;
  }
  if (!(p.width > 0.0)) throw Error(ErrorCode::InvalidArgument, "profile width must be positive");
  const double m = p.mass();
  if (std::abs(m) < 1e-14) throw Error(ErrorCode::ZeroMass, "profile has vanishing mass");
  p.scale *= p.sign / m;
  return p;
}

// ---------------------------------------------------------------------------
// Cauchy transform of n and the phase eta

namespace detail {

/// Integral of the piecewise-linear table against 1/(s - z), exact for the
/// interpolant. For real z the principal value is returned.
inline cplx tabulated_cauchy(const BroadeningProfile& p, cplx z) {
  const bool real_target = z.imag() == 0.0;
  cplx acc = 0.0;
  for (std::size_t k = 1; k < p.grid.size(); ++k) {
    const double a = p.grid[k - 1], b = p.grid[k];
    const double na = p.scale * p.values[k - 1], nb = p.scale * p.values[k];
    const double beta = (nb - na) / (b - a);
    const cplx coeff = na + beta * (z - a);
    cplx lg;
    if (real_target) {
      const double lam = z.real();
      // log|b - lam| - log|a - lam|; a vanishing distance cancels against the
      // neighbouring segment because both carry coefficient n(lam).
      const double db = std::abs(b - lam), da = std::abs(a - lam);
      lg = (db > 0.0 ? std::log(db) : 0.0) - (da > 0.0 ? std::log(da) : 0.0);
    } else {
      lg = std::log((z - b) / (z - a));
    }
    acc += coeff * lg + beta * (b - a);
  }
  return acc;
}

}  // namespace detail

/// Minimum |Im z| accepted by the tabulated (quadrature) path.
inline constexpr double kAxisFloor = 1e-12;

/// Integral of n(s)/(s - z) ds for z off the real axis.
inline cplx cauchy_of_density(const BroadeningProfile& p, cplx z) {
  if (z.imag() == 0.0) throw Error(ErrorCode::TooCloseToAxis, "z must be off the real axis");
  switch (p.shape) {
    case Shape::Lorentzian: {
      const double s = z.imag() > 0.0 ? 1.0 : -1.0;
      return -p.scale / (z + I_unit * (p.width * s));
    }
    case Shape::Rectangular:
    case Shape::DeltaApprox:
      return -2.0 * p.scale * std::atanh(p.width / z);
    case Shape::Tabulated:
      if (std::abs(z.imag()) < kAxisFloor)
        throw Error(ErrorCode::TooCloseToAxis, "|Im z| below the quadrature floor");
      return detail::tabulated_cauchy(p, z);
  }
  return 0.0;
}

/// eta(z) = z - (1/4) * integral n(s)/(s - z) ds, Im z != 0.
inline cplx eta_eval(const BroadeningProfile& p, cplx z) {
  return z - 0.25 * cauchy_of_density(p, z);
}

struct EtaValues {
  double lambda = 0.0;
  cplx eta_plus, eta_minus;
  cplx g_plus, g_minus;
};

/// Principal value of integral n(s)/(s - lambda) ds.
inline double pv_of_density(const BroadeningProfile& p, double lambda) {
  switch (p.shape) {
    case Shape::Lorentzian:
      return -p.scale * lambda / (lambda * lambda + p.width * p.width);
    case Shape::Rectangular:
    case Shape::DeltaApprox: {
      const double e = p.width;
      if (std::abs(std::abs(lambda) - e) < 1e-14 * (1.0 + e))
        throw Error(ErrorCode::PrincipalValueFailure, "lambda sits on a jump of n");
      return p.scale * std::log(std::abs((e - lambda) / (e + lambda)));
    }
    case Shape::Tabulated:
      return detail::tabulated_cauchy(p, cplx(lambda, 0.0)).real();
  }
  return 0.0;
}

/// Boundary values eta(lambda +- i0) and g(lambda +- i0).
inline EtaValues eta_boundary(const BroadeningProfile& p, double lambda) {
  if (!std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be finite");
  if (p.shape == Shape::Tabulated && (lambda < p.grid.front() || lambda > p.grid.back()))
    throw Error(ErrorCode::InvalidArgument, "lambda outside the tabulated grid");
  const double pv = pv_of_density(p, lambda);
  const double nl = p.density(lambda);
  EtaValues v;
  v.lambda = lambda;
  v.g_plus = 0.25 * cplx(pv, pi * nl);
  v.g_minus = 0.25 * cplx(pv, -pi * nl);
  v.eta_plus = lambda - v.g_plus;
  v.eta_minus = lambda - v.g_minus;
  return v;
}

/// eta at z, or its boundary value when z is real and `side` is +1/-1.
inline cplx eta_at(const BroadeningProfile& p, cplx z, int side = 0) {
  if (z.imag() != 0.0) return eta_eval(p, z);
  const EtaValues v = eta_boundary(p, z.real());
  if (side > 0) return v.eta_plus;
  if (side < 0) return v.eta_minus;
  throw Error(ErrorCode::TooCloseToAxis, "real z needs a side tag");
}

// ---------------------------------------------------------------------------
// Independent quadrature routes (used as oracles and for diagnostics)

/// Integral n(s)/(s - z) by adaptive Gauss-Kronrod on the density alone.
inline cplx cauchy_of_density_quadrature(const BroadeningProfile& p, cplx z) {
  if (std::abs(z.imag()) < kAxisFloor)
    throw Error(ErrorCode::TooCloseToAxis, "|Im z| below the quadrature floor");
  auto f = [&](double s) { return p.density(s) / (s - z); };
  if (p.shape == Shape::Tabulated) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k < p.grid.size(); ++k)
      acc += integrate_complex(f, p.grid[k - 1], p.grid[k], 1e-12, 10);
    return acc;
  }
  const auto [a, b] = p.support();
  // break points around the near-singular peak at Re z
  const double c = z.real(), w = 20.0 * std::abs(z.imag());
  std::vector<double> cuts{a, c - w, c, c + w, b};
  std::sort(cuts.begin(), cuts.end());
  cplx acc = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double lo = std::clamp(cuts[k - 1], a, b), hi = std::clamp(cuts[k], a, b);
    if (hi > lo) acc += integrate_complex(f, lo, hi, 1e-12, 15);
  }
  return acc;
}

inline cplx eta_eval_quadrature(const BroadeningProfile& p, cplx z) {
  return z - 0.25 * cauchy_of_density_quadrature(p, z);
}

/// Principal value by the symmetric split [lambda - delta, lambda + delta]:
/// the inner part uses the odd-part cancellation (n(l+u) - n(l-u))/u on
/// Gauss-Legendre nodes, the outer parts adaptive Gauss-Kronrod.
inline double pv_of_density_quadrature(const BroadeningProfile& p, double lambda,
                                       double delta = 0.0, double* error = nullptr) {
  auto [a, b] = p.support();
  if (delta <= 0.0) {
    if (p.shape == Shape::Tabulated) {
      double h = (b - a) / static_cast<double>(p.grid.size() - 1);
      delta = 2.0 * h;
    } else {
      delta = 1e-2 * (1.0 + std::abs(lambda));
    }
  }
  if (p.is_box()) {
    const double gap = std::abs(std::abs(lambda) - p.width);
    if (gap < 1e-14) throw Error(ErrorCode::PrincipalValueFailure, "lambda on a jump of n");
    delta = std::min(delta, 0.5 * gap);
  }
  auto f = [&](double s) { return cplx(p.density(s) / (s - lambda), 0.0); };
  double e1 = 0.0, e2 = 0.0;
  double outer = 0.0;
  const double lo = lambda - delta, hi = lambda + delta;
  if (lo > a) outer += integrate_complex(f, a, std::min(lo, b), 1e-12, 15, &e1).real();
  if (hi < b) outer += integrate_complex(f, std::max(hi, a), b, 1e-12, 15, &e2).real();
  const GaussRule g = gauss_legendre(24);
  double inner = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const double u = 0.5 * delta * (g.nodes[k] + 1.0);
    inner += 0.5 * delta * g.weights[k] * (p.density(lambda + u) - p.density(lambda - u)) / u;
  }
  if (error) *error = e1 + e2;
  if (!std::isfinite(outer + inner))
    throw Error(ErrorCode::PrincipalValueFailure, "principal value did not converge");
  return outer + inner;
}

// ---------------------------------------------------------------------------
// Zero-level curve Im eta(lambda + i nu) = 0, nu > 0

struct GammaCurve {
  std::vector<std::pair<double, double>> points;  // (lambda, nu), lambda ascending
  double lambda_minus = 0.0, lambda_plus = 0.0;   // real-axis crossings
  double nu_max = 0.0;
  double lambda_at_nu_max = 0.0;
  bool truncated = false;  // curve left the lambda window (UnboundedCurveTruncated)
  bool bounded = true;

  bool empty() const { return points.empty(); }
  /// Conjugate branch: (lambda, -nu).
  std::vector<cplx> mirrored() const {
    std::vector<cplx> out;
    for (auto [l, n] : points) out.emplace_back(l, -n);
    return out;
  }
};

struct GammaOptions {
  double lambda_min = -20.0;
  double lambda_max = 20.0;
  int lambda_samples = 401;
  double nu_floor = 1e-7;
  double nu_ceiling = 10.0;
  int nu_samples = 160;
  double tolerance = 1e-9;
};

namespace detail {

/// Im eta(z)/Im z = 1 - I(lambda, nu).
inline double gamma_indicator(const BroadeningProfile& p, double lambda, double nu) {
  return eta_eval(p, cplx(lambda, nu)).imag() / nu;
}

/// Largest nu in [floor, ceiling] with Im eta(lambda + i nu) = 0, if any.
inline std::optional<double> gamma_nu_root(const BroadeningProfile& p, double lambda,
                                           const GammaOptions& o) {
  const double r = std::log(o.nu_ceiling / o.nu_floor);
  double hi = o.nu_ceiling;
  double fhi = gamma_indicator(p, lambda, hi);
  for (int k = o.nu_samples - 1; k >= 0; --k) {
    const double lo = o.nu_floor * std::exp(r * k / (o.nu_samples - 1));
    const double flo = gamma_indicator(p, lambda, lo);
    if ((flo < 0.0) != (fhi < 0.0)) {
      double a = lo, b = hi, fa = flo;
      for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + b); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = gamma_indicator(p, lambda, m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    hi = lo;
    fhi = flo;
  }
  return std::nullopt;
}

}  // namespace detail

/// Traces gamma by a lambda scan with nu-bisection, then refines the
/// crossings lambda+- and the apex nu_max. Attenuators give an empty curve.
inline GammaCurve gamma_trace(const BroadeningProfile& p, const GammaOptions& o = {}) {
  GammaCurve c;
  if (p.sign < 0) return c;
  const int n = o.lambda_samples;
  std::vector<std::optional<double>> roots(n);
  std::vector<double> lams(n);
  for (int i = 0; i < n; ++i) {
    lams[i] = o.lambda_min + (o.lambda_max - o.lambda_min) * i / (n - 1.0);
    if (p.is_box() && std::abs(std::abs(lams[i]) - p.width) < 1e-12) lams[i] += 1e-9;
    roots[i] = detail::gamma_nu_root(p, lams[i], o);
    if (roots[i]) c.points.emplace_back(lams[i], *roots[i]);
  }
  if (c.points.empty()) return c;
  c.truncated = roots.front().has_value() || roots.back().has_value();
  c.bounded = !c.truncated;

  // crossings: Im eta / nu at the floor changes sign
  auto crossing = [&](double inside, double outside) {
    double a = inside, b = outside;
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-13; ++it) {
      const double m = 0.5 * (a + b);
      if (detail::gamma_indicator(p, m, o.nu_floor) < 0.0) a = m;
      else b = m;
    }
    return 0.5 * (a + b);
  };
  int first = -1, last = -1;
  for (int i = 0; i < n; ++i)
    if (roots[i]) {
      if (first < 0) first = i;
      last = i;
    }
  c.lambda_minus = first > 0 ? crossing(lams[first], lams[first - 1]) : o.lambda_min;
  c.lambda_plus = last < n - 1 ? crossing(lams[last], lams[last + 1]) : o.lambda_max;

  // apex: golden-section on nu(lambda) around the best scan sample
  int best = first;
  for (int i = first; i <= last; ++i)
    if (roots[i] && *roots[i] > *roots[best]) best = i;
  const double step = (o.lambda_max - o.lambda_min) / (n - 1.0);
  double a = lams[best] - step, b = lams[best] + step;
  auto nu_of = [&](double l) {
    const auto r = detail::gamma_nu_root(p, l, o);
    return r ? *r : 0.0;
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = nu_of(x1), f2 = nu_of(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = nu_of(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = nu_of(x1);
    }
  }
  c.lambda_at_nu_max = 0.5 * (a + b);
  c.nu_max = std::max({nu_of(c.lambda_at_nu_max), f1, f2});
  return c;
}

/// lambda(nu) for the rectangular line shape from the closed-form curve
/// equation lambda^2 = eps^2 - nu^2 + 2 eps nu / tan(8 eps nu); diagnostic only.
inline double rectangular_curve_formula(double eps, double nu) {
  const double v = eps * eps - nu * nu + 2.0 * eps * nu / std::tan(8.0 * eps * nu);
  return v > 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace mbrh
