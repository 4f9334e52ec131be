// pipeline.hpp - end-to-end runs on an evaluation lattice: RH path, direct
// integration, and field comparison.
#pragma once

#include "mbrh/direct.hpp"
#include "mbrh/io.hpp"
#include "mbrh/rhsolver.hpp"

#include <map>

namespace mbrh {

struct RhRun {
  std::vector<FieldSample> samples;
  std::vector<double> residual, cond;  // per sample
  std::vector<SolitonPole> poles;
  double det_error = 0.0;
  double max_antihermitian = 0.0;
};

/// RH reconstruction of E on the configured (t, x) lattice.
inline RhRun run_rh(const LoadedScenario& s, double circle_radius = 0.0, int circle_nodes = 64) {
  const RunConfig& c = s.config;
  if (c.problem_class == ProblemClass::AmplifierOval)
    throw Error(ErrorCode::InvalidArgument,
                "amplifier-oval runs are experimental and not wired to the lattice pipeline");
  const SpectralProblem pr(s.data, s.profile, {c.ode_step, c.lambda_nodes});
  RhRun run;
  if (s.profile.sign < 0) {
    const auto& w = c.zero_window;
    run.poles = table_poles({.poles = locate_a_zeros(pr, {w[0], w[1], w[2], w[3]}).poles});
  }
  ContourConfig cc;
  cc.window_min = c.lambda_min;
  cc.window_max = c.lambda_max;
  cc.panels = c.panels;
  cc.nodes_per_panel = c.nodes_per_panel;
  if (!run.poles.empty()) {
    double r = circle_radius;
    if (!(r > 0.0)) {
      r = std::numeric_limits<double>::infinity();
      for (const auto& a : run.poles) {
        r = std::min(r, 0.5 * a.z.imag());
        for (const auto& b : run.poles)
          if (&a != &b) r = std::min(r, 0.4 * std::abs(a.z - b.z));
      }
    }
    cc.circles = soliton_circles(run.poles, r, circle_nodes);
  }
  const SieSolver solver(contour_build(cc));
  const auto lams = solver.contour().real_nodes();
  const auto ts = c.t.values(), xs = c.x.values();
  for (double x : xs)
    if (x < 0.0 || x > s.data.L)
      throw Error(ErrorCode::SchemaError, "grids.x: lattice leaves [0, L]");

  std::vector<JumpData> jumps;
  std::function<JumpData(double, double)> jump_at;
  std::optional<MixedJumpTable> tab;
  std::optional<SpectralTable> st;
  if (c.problem_class == ProblemClass::Mixed) {
    tab.emplace(pr, lams, xs);
    jump_at = [&](double t, double x) { return contour_jump(solver.contour(), *tab, t, x, run.poles); };
  } else {
    st.emplace(compute_spectral_table(pr, lams));
    jump_at = [&](double t, double x) {
      JumpData d = soliton_jump(solver.contour(), run.poles, t, x, s.profile);
      std::size_t i = 0, n = 0;
      for (const Panel& p : solver.contour().panels)
        for (cplx z : p.nodes) {
          if (p.kind == PanelKind::RealSegment)
            d.J[n] = jump_wholeline(t, x, z.real(), st->r_plus[i++], s.profile);
          ++n;
        }
      return d;
    };
  }
  for (double x : xs)
    for (double t : ts) {
      const JumpData d = jump_at(t, x);
      run.det_error = std::max(run.det_error, d.det_error());
      const RHResult r = solver.solve(d);
      run.samples.push_back({t, x, r.E});
      run.residual.push_back(r.residual);
      run.cond.push_back(r.cond);
      run.max_antihermitian = std::max(run.max_antihermitian, r.antihermitian_error);
    }
  return run;
}

struct DirectRun {
  std::vector<FieldSample> samples;
  double conservation = 0.0;
};

/// Direct integration with step grids.direct_step, sampled on the lattice
/// (lattice points must be grid points).
inline DirectRun run_direct(const LoadedScenario& s) {
  const RunConfig& c = s.config;
  const double h = c.direct_step;
  const auto ts = c.t.values(), xs = c.x.values();
  auto index = [&](double v, const char* what) {
    const double k = v / h;
    if (v < 0.0 || std::abs(k - std::round(k)) > 1e-9)
      throw Error(ErrorCode::SchemaError, std::string("grids.") + what +
                                              ": lattice points must be multiples of direct_step");
    return static_cast<std::size_t>(std::llround(k));
  };
  std::size_t it = 0, ix = 0;
  for (double t : ts) it = std::max(it, index(t, "t"));
  for (double x : xs) ix = std::max(ix, index(x, "x"));
  DirectConfig dc;
  dc.dt = dc.dx = h;
  dc.nt = it + 1;
  dc.nx = ix + 1;
  dc.lambda_nodes = c.lambda_nodes;
  const FieldState st = integrate_direct(s.data, s.profile, dc);
  DirectRun run;
  run.conservation = st.max_conservation_error();
  for (double x : xs)
    for (double t : ts) run.samples.push_back({t, x, st.E(index(t, "t"), index(x, "x"))});
  return run;
}

struct CompareReport {
  std::size_t matched = 0;
  double rel_l2 = 0.0;
  double rel_linf = 0.0;   // max |a - b| / max |b|
  double abs_linf = 0.0;
};

/// Compares two field sets on their common (t, x) points (matched to 1e-9).
inline CompareReport compare_fields(const std::vector<FieldSample>& a,
                                    const std::vector<FieldSample>& b) {
  auto key = [](double t, double x) {
    return std::pair<long long, long long>{std::llround(t * 1e9), std::llround(x * 1e9)};
  };
  std::map<std::pair<long long, long long>, cplx> mb;
  for (const FieldSample& f : b) mb[key(f.t, f.x)] = f.E;
  CompareReport r;
  double num = 0.0, den = 0.0, peak = 0.0;
  for (const FieldSample& f : a) {
    const auto it = mb.find(key(f.t, f.x));
    if (it == mb.end()) continue;
    ++r.matched;
    const double d = std::abs(f.E - it->second);
    num += d * d;
    den += std::norm(it->second);
    peak = std::max(peak, std::abs(it->second));
    r.abs_linf = std::max(r.abs_linf, d);
  }
  if (r.matched == 0) throw Error(ErrorCode::SchemaError, "the two runs share no (t, x) points");
  r.rel_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  r.rel_linf = peak > 0.0 ? r.abs_linf / peak : r.abs_linf;
  return r;
}

}  // namespace mbrh
