// scenario.hpp - physical data of the mixed problem: boundary pulse E_in(t),
// initial field E0(x), initial polarisation rho0(x, lambda) and N0 = +sqrt(1 - |rho0|^2).
#pragma once

#include "mbrh/core.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace mbrh {

/// Inline scalar function spec.
///   zero
///   gaussian  amplitude * exp(-(s - center)^2 / (2 width^2))
///   sech      amplitude * sech((s - center) / width)
///   table     linear interpolation of (grid, values), zero outside
/// All shapes are multiplied by exp(i phase).
struct PulseSpec {
  std::string kind = "zero";
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  double phase = 0.0;
  std::vector<double> grid;
  std::vector<cplx> values;

  static PulseSpec zero() { return {}; }
  static PulseSpec gaussian(double amp, double center, double width) {
    return {"gaussian", amp, center, width, 0.0, {}, {}};
  }
  static PulseSpec sech(double amp, double center, double width = 1.0) {
    return {"sech", amp, center, width, 0.0, {}, {}};
  }
  static PulseSpec table(std::vector<double> g, std::vector<cplx> v) {
    return {"table", 0.0, 0.0, 1.0, 0.0, std::move(g), std::move(v)};
  }

  void validate(const std::string& where) const {
    if (kind == "zero") return;
    if (kind == "gaussian" || kind == "sech") {
      if (!(width > 0.0) || !std::isfinite(amplitude) || !std::isfinite(center))
        throw Error(ErrorCode::SchemaError, where + ": invalid pulse parameters");
      return;
    }
    if (kind == "table") {
      if (grid.size() < 2 || grid.size() != values.size())
        throw Error(ErrorCode::SchemaError, where + ": table needs >= 2 matching samples");
      for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
          throw Error(ErrorCode::SchemaError, where + ": table grid must increase");
      return;
    }
    throw Error(ErrorCode::SchemaError, where + ": unknown pulse kind '" + kind + "'");
  }

  cplx operator()(double s) const {
    double v = 0.0;
    if (kind == "gaussian") {
      const double u = (s - center) / width;
      v = amplitude * std::exp(-0.5 * u * u);
    } else if (kind == "sech") {
      v = amplitude / std::cosh((s - center) / width);
    } else if (kind == "table") {
      if (s < grid.front() || s > grid.back()) return 0.0;
      const std::size_t k = std::clamp<std::size_t>(
          std::upper_bound(grid.begin(), grid.end(), s) - grid.begin(), 1, grid.size() - 1);
      const double u = (s - grid[k - 1]) / (grid[k] - grid[k - 1]);
      return std::polar(1.0, phase) * ((1.0 - u) * values[k - 1] + u * values[k]);
    } else {
      return 0.0;
    }
    return std::polar(v, phase);
  }
};

/// Initial polarisation rho0(x, lambda).
using RhoFunction = std::function<cplx(double x, double lambda)>;

/// Boundary/initial data. rho0 must vanish beyond x = L.
struct ScenarioData {
  std::function<cplx(double)> E_in = [](double) { return cplx(0.0); };
  std::function<cplx(double)> E0 = [](double) { return cplx(0.0); };
  RhoFunction rho0 = [](double, double) { return cplx(0.0); };
  double L = 5.0;
  double T = 10.0;

  /// N0 from the positive branch of the square root.
  double N0(double x, double lambda) const {
    return std::sqrt(std::max(0.0, 1.0 - std::norm(rho0(x, lambda))));
  }

  static ScenarioData trivial_data(double L = 5.0, double T = 10.0) {
    ScenarioData s;
    s.L = L;
    s.T = T;
    return s;
  }
};

/// Checks positive L, T, decay of E_in at T and |rho0| <= 1 on the sample grid.
inline void validate_scenario(const ScenarioData& s, const std::vector<double>& lambda_samples,
                              int x_samples = 101, int t_samples = 1001) {
  if (!(s.L > 0.0) || !(s.T > 0.0))
    throw Error(ErrorCode::SchemaError, "L and T must be positive");
  double peak = 0.0;
  for (int i = 0; i < t_samples; ++i)
    peak = std::max(peak, std::abs(s.E_in(s.T * i / (t_samples - 1.0))));
  if (std::abs(s.E_in(s.T)) > 1e-6 * peak)
    throw Error(ErrorCode::DecayViolation, "boundary pulse has not decayed at t = T");
  for (int i = 0; i < x_samples; ++i) {
    const double x = s.L * i / (x_samples - 1.0);
    for (double l : lambda_samples) {
      const double a = std::abs(s.rho0(x, l));
      if (!(a <= 1.0))
        throw Error(ErrorCode::InvariantError,
                    "|rho0| = " + std::to_string(a) + " > 1 at (x, lambda) = (" +
                        std::to_string(x) + ", " + std::to_string(l) +
                        "); N0 needs the positive square-root branch");
    }
  }
}

}  // namespace mbrh
