// io.hpp - scenario files (JSON), run configuration, CSV/JSON result files.
//
// Scenario schema (all keys optional unless noted):
//   {
//     "profile":  {"shape": "lorentzian", "l": 1.0, "sign": -1}
//                 {"shape": "rectangular" | "delta_approx", "eps": 0.5, "sign": 1}
//                 {"shape": "tabulated", "file": "n.csv", "sign": -1}     (columns lambda,n)
//     "L": 5.0, "T": 10.0,
//     "E_in", "E0": {"pulse": "gaussian" | "sech" | "zero", "amplitude": 1.0,
//                    "center": 4.0, "width": 0.8, "phase": 0.0}
//                   {"file": "pulse.csv"}                                  (columns s,re,im)
//     "rho0":     {"kind": "zero"}
//                 {"kind": "separable", "amplitude": 0.2, "x_center": 1.0, "x_width": 0.3,
//                  "lambda_width": 1.0, "lambda_chirp": 0.0}
//                 {"kind": "table", "file": "rho0.csv"}                   (columns x,lambda,re,im)
//     "problem_class": "mixed" | "whole-line" | "amplifier-oval",
//     "grids": {"lambda_window": [-20, 20], "panels": 24, "nodes_per_panel": 16,
//               "lambda_nodes": 200, "ode_step": 0.01, "direct_step": 0.05,
//               "t": [0, 10, 11], "x": [0, 5, 6], "zero_window": [-4, 4, 0.01, 4]},
//     "tolerances": {"compare_rel_linf": 0.01},
//     "output_dir": "out"
//   }
#pragma once

#include "mbrh/broadening.hpp"
#include "mbrh/jump.hpp"
#include "mbrh/scenario.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace mbrh {

using json = nlohmann::json;

/// Evaluation lattice start:stop:count (count >= 1; count = 1 gives start).
struct Lattice {
  double start = 0.0, stop = 0.0;
  int count = 1;
  std::vector<double> values() const {
    std::vector<double> v(count);
    for (int k = 0; k < count; ++k) v[k] = count == 1 ? start : start + (stop - start) * k / (count - 1.0);
    return v;
  }
};

inline Lattice parse_lattice(const std::string& s) {
  Lattice l;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> l.start >> c1 >> l.stop >> c2 >> l.count) || c1 != ':' || c2 != ':' || l.count < 1 ||
      !(is >> std::ws).eof())
    throw Error(ErrorCode::SchemaError, "lattice '" + s + "' is not start:stop:count");
  return l;
}

struct RunConfig {
  std::filesystem::path scenario_path;
  json profile_block = json::object();
  ProblemClass problem_class = ProblemClass::Mixed;
  double lambda_min = -20.0, lambda_max = 20.0;
  int panels = 24, nodes_per_panel = 16;
  int lambda_nodes = 200;
  double ode_step = 0.01;
  double direct_step = 0.05;
  Lattice t{0.0, 10.0, 11}, x{0.0, 5.0, 6};
  std::array<double, 4> zero_window{-4.0, 4.0, 1e-2, 4.0};
  std::map<std::string, double> tolerances;
  std::filesystem::path output_dir = "out";
  json resolved = json::object();  // the config with defaults filled in
};

struct LoadedScenario {
  ScenarioData data;
  BroadeningProfile profile;
  RunConfig config;
};

namespace detail {

inline std::vector<std::vector<double>> read_csv_numbers(const std::filesystem::path& p,
                                                         std::size_t columns,
                                                         const std::string& where) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::IOError, where + ": cannot open " + p.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    std::vector<double> r;
    double v;
    while (is >> v) r.push_back(v);
    if (r.empty()) continue;  // header
    if (r.size() != columns)
      throw Error(ErrorCode::SchemaError, where + ": expected " + std::to_string(columns) +
                                              " columns in " + p.string());
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw Error(ErrorCode::SchemaError, where + ": no data rows in " + p.string());
  return rows;
}

template <class T>
T get_or(const json& j, const char* key, T def, const std::string& where) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::SchemaError, where + "." + key + ": wrong type");
  }
}

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, where + ": expected an object");
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw Error(ErrorCode::SchemaError, where + "." + it.key() + ": unknown key");
  }
}

}  // namespace detail

inline BroadeningProfile parse_profile(const json& j, const std::filesystem::path& base,
                                       const std::string& where = "profile") {
  detail::require_object(j, where);
  detail::reject_unknown(j, {"shape", "l", "eps", "sign", "file"}, where);
  const std::string shape = detail::get_or<std::string>(j, "shape", "lorentzian", where);
  const int sign = detail::get_or<int>(j, "sign", -1, where);
  if (sign != 1 && sign != -1) throw Error(ErrorCode::SchemaError, where + ".sign: must be +1 or -1");
  if (shape == "lorentzian") {
    const double l = detail::get_or<double>(j, "l", 1.0, where);
    if (!(l > 0.0)) throw Error(ErrorCode::SchemaError, where + ".l: must be positive");
    return BroadeningProfile::lorentzian(l, sign);
  }
  if (shape == "rectangular" || shape == "delta_approx") {
    const double eps = detail::get_or<double>(j, "eps", shape == "rectangular" ? 0.5 : 1e-3, where);
    if (!(eps > 0.0)) throw Error(ErrorCode::SchemaError, where + ".eps: must be positive");
    return shape == "rectangular" ? BroadeningProfile::rectangular(eps, sign)
                                  : BroadeningProfile::delta_approx(eps, sign);
  }
  if (shape == "tabulated") {
    if (!j.contains("file")) throw Error(ErrorCode::SchemaError, where + ".file: required");
    const auto rows = detail::read_csv_numbers(base / j.at("file").get<std::string>(), 2, where);
    std::vector<double> g, v;
    for (const auto& r : rows) g.push_back(r[0]), v.push_back(r[1]);
    return profile_normalize(BroadeningProfile::tabulated(g, v, sign));
  }
  throw Error(ErrorCode::SchemaError, where + ".shape: unknown shape '" + shape + "'");
}

inline PulseSpec parse_pulse(const json& j, const std::filesystem::path& base,
                             const std::string& where) {
  detail::require_object(j, where);
  detail::reject_unknown(j, {"pulse", "amplitude", "center", "width", "phase", "file"}, where);
  PulseSpec p;
  if (j.contains("file")) {
    const auto rows = detail::read_csv_numbers(base / j.at("file").get<std::string>(), 3, where);
    std::vector<double> g;
    std::vector<cplx> v;
    for (const auto& r : rows) g.push_back(r[0]), v.emplace_back(r[1], r[2]);
    p = PulseSpec::table(g, v);
  } else {
    p.kind = detail::get_or<std::string>(j, "pulse", "zero", where);
    p.amplitude = detail::get_or<double>(j, "amplitude", 0.0, where);
    p.center = detail::get_or<double>(j, "center", 0.0, where);
    p.width = detail::get_or<double>(j, "width", 1.0, where);
  }
  p.phase = detail::get_or<double>(j, "phase", 0.0, where);
  p.validate(where);
  return p;
}

/// rho0 on a tensor (x, lambda) table, bilinear, zero outside.
inline RhoFunction rho_table(std::vector<double> xs, std::vector<double> ls, std::vector<cplx> v) {
  return [xs = std::move(xs), ls = std::move(ls), v = std::move(v)](double x, double l) -> cplx {
    if (x < xs.front() || x > xs.back() || l < ls.front() || l > ls.back()) return 0.0;
    auto locate = [](const std::vector<double>& g, double s) {
      if (g.size() == 1) return std::pair<std::size_t, double>{0, 0.0};
      const std::size_t k = std::clamp<std::size_t>(
          std::upper_bound(g.begin(), g.end(), s) - g.begin(), 1, g.size() - 1);
      return std::pair<std::size_t, double>{k - 1, (s - g[k - 1]) / (g[k] - g[k - 1])};
    };
    const auto [i, u] = locate(xs, x);
    const auto [k, w] = locate(ls, l);
    const std::size_t nl = ls.size();
    auto at = [&](std::size_t a, std::size_t b) {
      return v[std::min(a, xs.size() - 1) * nl + std::min(b, nl - 1)];
    };
    return (1 - u) * ((1 - w) * at(i, k) + w * at(i, k + 1)) +
           u * ((1 - w) * at(i + 1, k) + w * at(i + 1, k + 1));
  };
}

inline RhoFunction parse_rho0(const json& j, const std::filesystem::path& base,
                              const std::string& where = "rho0") {
  detail::require_object(j, where);
  const std::string kind = detail::get_or<std::string>(j, "kind", "zero", where);
  if (kind == "zero") {
    detail::reject_unknown(j, {"kind"}, where);
    return [](double, double) { return cplx(0.0); };
  }
  if (kind == "separable") {
    detail::reject_unknown(j, {"kind", "amplitude", "x_center", "x_width", "lambda_width",
                               "lambda_chirp"},
                           where);
    const double a = detail::get_or<double>(j, "amplitude", 0.0, where);
    const double xc = detail::get_or<double>(j, "x_center", 0.0, where);
    const double xw = detail::get_or<double>(j, "x_width", 1.0, where);
    const double lw = detail::get_or<double>(j, "lambda_width", 1.0, where);
    const double ch = detail::get_or<double>(j, "lambda_chirp", 0.0, where);
    if (!(xw > 0.0) || !(lw > 0.0))
      throw Error(ErrorCode::SchemaError, where + ": widths must be positive");
    return [=](double x, double l) {
      const double u = (x - xc) / xw, s = l / lw;
      return a * std::exp(-0.5 * (u * u + s * s)) * std::polar(1.0, ch * l);
    };
  }
  if (kind == "table") {
    detail::reject_unknown(j, {"kind", "file"}, where);
    if (!j.contains("file")) throw Error(ErrorCode::SchemaError, where + ".file: required");
    const auto rows = detail::read_csv_numbers(base / j.at("file").get<std::string>(), 4, where);
    std::vector<double> xs, ls;
    for (const auto& r : rows) {
      if (xs.empty() || r[0] != xs.back()) xs.push_back(r[0]);
      if (xs.size() == 1) ls.push_back(r[1]);
    }
    if (rows.size() != xs.size() * ls.size())
      throw Error(ErrorCode::SchemaError, where + ": table is not a full x-major (x, lambda) grid");
    std::vector<cplx> v;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r][0] != xs[r / ls.size()] || rows[r][1] != ls[r % ls.size()])
        throw Error(ErrorCode::SchemaError, where + ": table is not a full x-major (x, lambda) grid");
      v.emplace_back(rows[r][2], rows[r][3]);
    }
    for (std::size_t k = 1; k < xs.size(); ++k)
      if (!(xs[k] > xs[k - 1])) throw Error(ErrorCode::SchemaError, where + ": x must increase");
    for (std::size_t k = 1; k < ls.size(); ++k)
      if (!(ls[k] > ls[k - 1])) throw Error(ErrorCode::SchemaError, where + ": lambda must increase");
    return rho_table(xs, ls, v);
  }
  throw Error(ErrorCode::SchemaError, where + ".kind: unknown kind '" + kind + "'");
}

inline ProblemClass parse_problem_class(const std::string& s) {
  if (s == "mixed") return ProblemClass::Mixed;
  if (s == "whole-line") return ProblemClass::WholeLine;
  if (s == "amplifier-oval") return ProblemClass::AmplifierOval;
  throw Error(ErrorCode::SchemaError, "problem_class: unknown class '" + s + "'");
}

namespace detail {

inline Lattice lattice_from(const json& j, Lattice def, const std::string& where) {
  if (j.is_null()) return def;
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::SchemaError, where + ": expected [start, stop, count]");
  Lattice l{j[0].get<double>(), j[1].get<double>(), j[2].get<int>()};
  if (l.count < 1) throw Error(ErrorCode::SchemaError, where + ": count must be >= 1");
  return l;
}

}  // namespace detail

inline LoadedScenario load_scenario_json(const json& root, const std::filesystem::path& base,
                                         const std::filesystem::path& path = {}) {
  detail::require_object(root, "scenario");
  detail::reject_unknown(root, {"profile", "L", "T", "E_in", "E0", "rho0", "problem_class", "grids",
                                "tolerances", "output_dir"},
                         "scenario");
  LoadedScenario s;
  RunConfig& c = s.config;
  c.scenario_path = path;
  c.profile_block = root.value("profile", json::object());
  s.profile = parse_profile(c.profile_block, base);
  s.data.L = detail::get_or<double>(root, "L", 5.0, "scenario");
  s.data.T = detail::get_or<double>(root, "T", 10.0, "scenario");
  const PulseSpec ein = parse_pulse(root.value("E_in", json::object()), base, "E_in");
  const PulseSpec e0 = parse_pulse(root.value("E0", json::object()), base, "E0");
  s.data.E_in = ein;
  s.data.E0 = e0;
  s.data.rho0 = parse_rho0(root.value("rho0", json::object()), base);
  c.problem_class =
      parse_problem_class(detail::get_or<std::string>(root, "problem_class", "mixed", "scenario"));

  const json g = root.value("grids", json::object());
  detail::require_object(g, "grids");
  detail::reject_unknown(g, {"lambda_window", "panels", "nodes_per_panel", "lambda_nodes", "ode_step",
                             "direct_step", "t", "x", "zero_window"},
                         "grids");
  if (g.contains("lambda_window")) {
    const json& w = g.at("lambda_window");
    if (!w.is_array() || w.size() != 2 || !(w[1].get<double>() > w[0].get<double>()))
      throw Error(ErrorCode::SchemaError, "grids.lambda_window: expected [min, max] with min < max");
    c.lambda_min = w[0].get<double>();
    c.lambda_max = w[1].get<double>();
  }
  c.panels = detail::get_or<int>(g, "panels", c.panels, "grids");
  c.nodes_per_panel = detail::get_or<int>(g, "nodes_per_panel", c.nodes_per_panel, "grids");
  c.lambda_nodes = detail::get_or<int>(g, "lambda_nodes", c.lambda_nodes, "grids");
  c.ode_step = detail::get_or<double>(g, "ode_step", c.ode_step, "grids");
  c.direct_step = detail::get_or<double>(g, "direct_step", c.direct_step, "grids");
  c.t = detail::lattice_from(g.value("t", json()), Lattice{0.0, s.data.T, 11}, "grids.t");
  c.x = detail::lattice_from(g.value("x", json()), Lattice{0.0, s.data.L, 6}, "grids.x");
  if (g.contains("zero_window")) {
    const json& w = g.at("zero_window");
    if (!w.is_array() || w.size() != 4)
      throw Error(ErrorCode::SchemaError, "grids.zero_window: expected [re_min, re_max, im_min, im_max]");
    for (int k = 0; k < 4; ++k) c.zero_window[k] = w[k].get<double>();
  }
  if (c.panels < 1 || c.nodes_per_panel < 2 || c.lambda_nodes < 2)
    throw Error(ErrorCode::SchemaError, "grids: node counts must be positive");
  if (!(c.ode_step > 0.0) || !(c.direct_step > 0.0))
    throw Error(ErrorCode::SchemaError, "grids: steps must be positive");
  const json tol = root.value("tolerances", json::object());
  detail::require_object(tol, "tolerances");
  for (auto it = tol.begin(); it != tol.end(); ++it) {
    if (!it.value().is_number() || !(it.value().get<double>() > 0.0))
      throw Error(ErrorCode::SchemaError, "tolerances." + it.key() + ": must be a positive number");
    c.tolerances[it.key()] = it.value().get<double>();
  }
  c.output_dir = detail::get_or<std::string>(root, "output_dir", "out", "scenario");

  // invariants of the physical data, on the medium quadrature nodes
  std::vector<double> ls;
  if (s.profile.is_box()) {
    for (int k = 0; k <= 20; ++k) ls.push_back(s.profile.width * (-1.0 + k / 10.0));
  } else {
    for (int k = 0; k <= 40; ++k) ls.push_back(c.lambda_min + (c.lambda_max - c.lambda_min) * k / 40.0);
  }
  validate_scenario(s.data, ls);

  c.resolved = {
      {"profile", c.profile_block},
      {"L", s.data.L},
      {"T", s.data.T},
      {"E_in", root.value("E_in", json::object())},
      {"E0", root.value("E0", json::object())},
      {"rho0", root.value("rho0", json::object())},
      {"problem_class", to_string(c.problem_class)},
      {"grids",
       {{"lambda_window", {c.lambda_min, c.lambda_max}},
        {"panels", c.panels},
        {"nodes_per_panel", c.nodes_per_panel},
        {"lambda_nodes", c.lambda_nodes},
        {"ode_step", c.ode_step},
        {"direct_step", c.direct_step},
        {"t", {c.t.start, c.t.stop, c.t.count}},
        {"x", {c.x.start, c.x.stop, c.x.count}},
        {"zero_window", c.zero_window}}},
      {"tolerances", c.tolerances},
      {"output_dir", c.output_dir.string()},
  };
  return s;
}

inline LoadedScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot open scenario " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
  return load_scenario_json(root, path.parent_path(), path);
}

// ---------------------------------------------------------------------------
// Output

/// %.17g formatting, so values round-trip exactly.
inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// FNV-1a 64-bit hash of the canonical config dump.
inline std::string config_hash(const json& j) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header) : path_(p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    out_.open(p);
    if (!out_) throw Error(ErrorCode::IOError, "cannot write " + p.string());
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << '\n';
  }
  void row(const std::vector<double>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) out_ << (k ? "," : "") << fmt17(v[k]);
    out_ << '\n';
    if (!out_) throw Error(ErrorCode::IOError, "write failed for " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

struct FieldSample {
  double t, x;
  cplx E;
};

inline void write_fields_csv(const std::filesystem::path& p, const std::vector<FieldSample>& s) {
  if (s.empty()) throw Error(ErrorCode::IOError, "no field samples to write");
  CsvWriter w(p, {"t", "x", "re_E", "im_E", "abs_E"});
  for (const FieldSample& f : s) w.row({f.t, f.x, f.E.real(), f.E.imag(), std::abs(f.E)});
}

inline void write_spectra_csv(const std::filesystem::path& p, const SpectralTable& t) {
  if (t.lambda.empty()) throw Error(ErrorCode::IOError, "empty spectral table");
  CsvWriter w(p, {"lambda", "re_a", "im_a", "re_b", "im_b", "abs_r"});
  for (std::size_t i = 0; i < t.lambda.size(); ++i)
    w.row({t.lambda[i], t.a_plus[i].real(), t.a_plus[i].imag(), t.b_plus[i].real(),
           t.b_plus[i].imag(), std::abs(t.r_plus[i])});
}

inline std::vector<FieldSample> read_fields_csv(const std::filesystem::path& p) {
  const auto rows = detail::read_csv_numbers(p, 5, "fields");
  std::vector<FieldSample> s;
  for (const auto& r : rows) s.push_back({r[0], r[1], cplx(r[2], r[3])});
  return s;
}

inline void write_meta_json(const std::filesystem::path& p, const std::string& command,
                            const json& config, const json& diagnostics) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  json meta = {{"command", command},
               {"config", config},
               {"config_hash", config_hash(config)},
               {"versions", {{"mbrh", "1.0.0"}}},
               {"diagnostics", diagnostics}};
  std::ofstream out(p);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + p.string());
  out << meta.dump(2) << '\n';
}

}  // namespace mbrh
