// mb-rh: command-line front end.
//   exit 0 on success, 2 on configuration errors, 3 on numerical failures.
#include "mbrh/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace mbrh;
namespace fs = std::filesystem;

namespace {

struct ProfileFlags {
  std::string shape = "lorentzian";
  double l = 1.0;
  double eps = 0.5;
  int sign = -1;
  std::string file;

  void add(CLI::App* app) {
    app->add_option("--profile", shape, "lorentzian | rectangular | delta_approx | tabulated")
        ->capture_default_str();
    app->add_option("--l", l, "Lorentzian half-width")->capture_default_str();
    app->add_option("--eps", eps, "box half-width")->capture_default_str();
    app->add_option("--sign", sign, "-1 attenuator, +1 amplifier")->capture_default_str();
    app->add_option("--file", file, "two-column CSV (lambda, n) for tabulated profiles");
  }
  json block() const {
    json j = {{"shape", shape}, {"sign", sign}};
    if (shape == "lorentzian") j["l"] = l;
    if (shape == "rectangular" || shape == "delta_approx") j["eps"] = eps;
    if (shape == "tabulated") j["file"] = file;
    return j;
  }
};

std::pair<double, double> parse_window(const std::string& s) {
  const auto c = s.find(':');
  try {
    if (c == std::string::npos) throw std::invalid_argument(s);
    const double a = std::stod(s.substr(0, c)), b = std::stod(s.substr(c + 1));
    if (!(b > a)) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::exception&) {
    throw Error(ErrorCode::SchemaError, "window '" + s + "' is not min:max");
  }
}

fs::path out_dir(const std::string& flag, const LoadedScenario* s) {
  if (!flag.empty()) return flag;
  return s ? s->config.output_dir : fs::path("out");
}

double peak(const std::vector<FieldSample>& v) {
  double m = 0.0;
  for (const auto& f : v) m = std::max(m, std::abs(f.E));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell-Bloch mixed problem via a matrix Riemann-Hilbert problem"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_flag;
  app.add_option("--out", out_flag, "output directory (overrides the config)");

  ProfileFlags pf_eta, pf_curve, pf_sol;
  int grid = 401;
  std::string window = "-20:20";
  auto* eta = app.add_subcommand("eta", "eta(+-) on a real grid -> eta.csv");
  pf_eta.add(eta);
  eta->add_option("--grid", grid, "number of lambda points")->capture_default_str();
  eta->add_option("--window", window, "lambda window min:max")->capture_default_str();

  auto* curve = app.add_subcommand("curve", "zero-level curve Im eta = 0 -> curve.csv");
  pf_curve.add(curve);
  curve->add_option("--window", window, "lambda window min:max")->capture_default_str();

  std::string config;
  auto* spectra = app.add_subcommand("spectra", "a, b, r on the lambda window -> spectra.csv");
  spectra->add_option("--config", config, "scenario JSON")->required();

  double jt = 0.0, jx = 0.0;
  auto* jump = app.add_subcommand("jump", "jump matrices at one (t, x) -> jump.csv");
  jump->add_option("--config", config, "scenario JSON")->required();
  jump->add_option("--t", jt, "time")->capture_default_str();
  jump->add_option("--x", jx, "position (a point in [0, L])")->capture_default_str();

  auto* solve_rh = app.add_subcommand("solve-rh", "RH reconstruction on the lattice -> fields.csv");
  solve_rh->add_option("--config", config, "scenario JSON")->required();

  auto* solve_direct = app.add_subcommand("solve-direct", "direct integration -> fields.csv");
  solve_direct->add_option("--config", config, "scenario JSON")->required();

  double nu = 0.5, t0 = 5.0, phase = 0.0;
  std::string xl = "0:10:200", tl = "0:20:400";
  auto* soliton = app.add_subcommand("soliton", "closed-form one-soliton field -> fields.csv");
  soliton->add_option("--nu", nu, "Im z1")->capture_default_str();
  soliton->add_option("--t0", t0, "time of the peak at x = 0")->capture_default_str();
  soliton->add_option("--phase", phase, "phase of the norming constant")->capture_default_str();
  soliton->add_option("--x", xl, "x lattice start:stop:count")->capture_default_str();
  soliton->add_option("--t", tl, "t lattice start:stop:count")->capture_default_str();
  pf_sol.shape = "delta_approx";
  pf_sol.eps = 1e-3;
  pf_sol.add(soliton);

  std::string run_a, run_b;
  auto* compare = app.add_subcommand("compare", "difference of two fields.csv files");
  compare->add_option("--run-a", run_a, "fields.csv")->required();
  compare->add_option("--run-b", run_b, "fields.csv (reference)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eta->parsed()) {
      const BroadeningProfile p = parse_profile(pf_eta.block(), fs::current_path());
      const auto [a, b] = parse_window(window);
      if (grid < 2) throw Error(ErrorCode::SchemaError, "--grid must be >= 2");
      const fs::path dir = out_dir(out_flag, nullptr);
      CsvWriter w(dir / "eta.csv", {"lambda", "re_eta_plus", "im_eta_plus", "re_eta_minus",
                                    "im_eta_minus", "n"});
      for (int i = 0; i < grid; ++i) {
        const double l = a + (b - a) * i / (grid - 1.0);
        const EtaValues v = eta_boundary(p, l);
        w.row({l, v.eta_plus.real(), v.eta_plus.imag(), v.eta_minus.real(), v.eta_minus.imag(),
               p.density(l)});
      }
      write_meta_json(dir / "meta.json", "eta", {{"profile", pf_eta.block()}, {"grid", grid}, {"window", window}}, {});
      std::cout << "eta: " << grid << " points written to " << (dir / "eta.csv").string() << '\n';
    } else if (curve->parsed()) {
      const BroadeningProfile p = parse_profile(pf_curve.block(), fs::current_path());
      const auto [a, b] = parse_window(window);
      GammaOptions o;
      o.lambda_min = a;
      o.lambda_max = b;
      const GammaCurve g = gamma_trace(p, o);
      const fs::path dir = out_dir(out_flag, nullptr);
      CsvWriter w(dir / "curve.csv", {"lambda", "nu"});
      for (const auto& [l, n] : g.points) w.row({l, n});
      write_meta_json(dir / "meta.json", "curve", {{"profile", pf_curve.block()}, {"window", window}},
                      {{"nu_max", g.nu_max},
                       {"lambda_minus", g.lambda_minus},
                       {"lambda_plus", g.lambda_plus},
                       {"truncated", g.truncated}});
      std::cout << "curve: " << g.points.size() << " points, nu_max = " << fmt17(g.nu_max) << '\n';
    } else if (spectra->parsed()) {
      const LoadedScenario s = load_scenario(config);
      const SpectralProblem pr(s.data, s.profile, {s.config.ode_step, s.config.lambda_nodes});
      const auto grid_l = uniform_grid(s.config.lambda_min, s.config.lambda_max, 401);
      std::optional<Window> win;
      if (s.profile.sign < 0) {
        const auto& w = s.config.zero_window;
        win = Window{w[0], w[1], w[2], w[3]};
      }
      const SpectralTable t = compute_spectral_table(pr, grid_l, win);
      const fs::path dir = out_dir(out_flag, &s);
      write_spectra_csv(dir / "spectra.csv", t);
      json poles = json::array();
      for (const Pole& p : t.poles)
        poles.push_back({{"z", {p.z.real(), p.z.imag()}}, {"m", {p.m.real(), p.m.imag()}}});
      write_meta_json(dir / "meta.json", "spectra", s.config.resolved,
                      {{"det_error", t.det_error}, {"reduction_error", t.reduction_error}, {"poles", poles}});
      std::cout << "spectra: det error " << fmt17(t.det_error) << ", reduction error "
                << fmt17(t.reduction_error) << ", " << t.poles.size() << " zero(s) of a\n";
    } else if (jump->parsed()) {
      const LoadedScenario s = load_scenario(config);
      if (jx < 0.0 || jx > s.data.L) throw Error(ErrorCode::SchemaError, "--x must lie in [0, L]");
      const SpectralProblem pr(s.data, s.profile, {s.config.ode_step, s.config.lambda_nodes});
      const auto lams = uniform_grid(s.config.lambda_min, s.config.lambda_max, 401);
      JumpData d;
      if (s.config.problem_class == ProblemClass::Mixed) {
        d = MixedJumpTable(pr, lams, {jx}).jump(jt, jx);
      } else {
        const SpectralTable t = compute_spectral_table(pr, lams);
        d.cls = ProblemClass::WholeLine;
        d.t = jt;
        d.x = jx;
        for (std::size_t i = 0; i < lams.size(); ++i) {
          d.nodes.emplace_back(lams[i], 0.0);
          d.J.push_back(jump_wholeline(jt, jx, lams[i], t.r_plus[i], s.profile));
        }
      }
      const fs::path dir = out_dir(out_flag, &s);
      CsvWriter w(dir / "jump.csv", {"lambda", "re_J11", "im_J11", "re_J12", "im_J12", "re_J21",
                                     "im_J21", "re_J22", "im_J22"});
      for (std::size_t i = 0; i < d.J.size(); ++i) {
        const Mat2& J = d.J[i];
        w.row({d.nodes[i].real(), J(0, 0).real(), J(0, 0).imag(), J(0, 1).real(), J(0, 1).imag(),
               J(1, 0).real(), J(1, 0).imag(), J(1, 1).real(), J(1, 1).imag()});
      }
      const double pd = posdef_check(d);
      write_meta_json(dir / "meta.json", "jump", s.config.resolved,
                      {{"t", jt}, {"x", jx}, {"det_error", d.det_error()}, {"posdef_min", pd}});
      std::cout << "jump: det error " << fmt17(d.det_error()) << ", min eig Re J " << fmt17(pd) << '\n';
    } else if (solve_rh->parsed()) {
      const LoadedScenario s = load_scenario(config);
      const RhRun r = run_rh(s);
      const fs::path dir = out_dir(out_flag, &s);
      write_fields_csv(dir / "fields.csv", r.samples);
      CsvWriter w(dir / "rh_diagnostics.csv", {"t", "x", "residual", "cond"});
      for (std::size_t k = 0; k < r.samples.size(); ++k)
        w.row({r.samples[k].t, r.samples[k].x, r.residual[k], r.cond[k]});
      const double res = *std::max_element(r.residual.begin(), r.residual.end());
      const double cnd = *std::max_element(r.cond.begin(), r.cond.end());
      write_meta_json(dir / "meta.json", "solve-rh", s.config.resolved,
                      {{"max_residual", res},
                       {"max_cond", cnd},
                       {"det_error", r.det_error},
                       {"poles", r.poles.size()},
                       {"E_peak", peak(r.samples)}});
      std::cout << "solve-rh: max residual " << fmt17(res) << ", max cond " << fmt17(cnd)
                << ", E peak " << fmt17(peak(r.samples)) << '\n';
    } else if (solve_direct->parsed()) {
      const LoadedScenario s = load_scenario(config);
      const DirectRun r = run_direct(s);
      const fs::path dir = out_dir(out_flag, &s);
      write_fields_csv(dir / "fields.csv", r.samples);
      write_meta_json(dir / "meta.json", "solve-direct", s.config.resolved,
                      {{"conservation_drift", r.conservation}, {"E_peak", peak(r.samples)}});
      std::cout << "solve-direct: conservation drift " << fmt17(r.conservation) << ", E peak "
                << fmt17(peak(r.samples)) << '\n';
    } else if (soliton->parsed()) {
      if (!(nu > 0.0)) throw Error(ErrorCode::SchemaError, "--nu must be positive");
      const BroadeningProfile p = parse_profile(pf_sol.block(), fs::current_path());
      const std::vector<SolitonPole> poles{soliton_pole(nu, t0, phase)};
      std::vector<FieldSample> out;
      for (double x : parse_lattice(xl).values())
        for (double t : parse_lattice(tl).values())
          out.push_back({t, x, soliton_closed_form(poles, t, x, p).E});
      const fs::path dir = out_dir(out_flag, nullptr);
      write_fields_csv(dir / "fields.csv", out);
      write_meta_json(dir / "meta.json", "soliton",
                      {{"nu", nu}, {"t0", t0}, {"phase", phase}, {"x", xl}, {"t", tl},
                       {"profile", pf_sol.block()}},
                      {{"E_peak", peak(out)}});
      std::cout << "soliton: |E|max = " << fmt17(peak(out)) << " (4 nu = " << fmt17(4.0 * nu) << ")\n";
    } else if (compare->parsed()) {
      const CompareReport r = compare_fields(read_fields_csv(run_a), read_fields_csv(run_b));
      const fs::path dir = out_dir(out_flag, nullptr);
      write_meta_json(dir / "compare.json", "compare", {{"run_a", run_a}, {"run_b", run_b}},
                      {{"matched", r.matched},
                       {"rel_l2", r.rel_l2},
                       {"rel_linf", r.rel_linf},
                       {"abs_linf", r.abs_linf}});
      std::cout << "compare: " << r.matched << " points, rel L2 " << fmt17(r.rel_l2)
                << ", rel Linf " << fmt17(r.rel_linf) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "mb-rh: " << e.what() << '\n';
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "mb-rh: IOError: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "mb-rh: SchemaError: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
