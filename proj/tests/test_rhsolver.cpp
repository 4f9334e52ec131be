#include "mbrh/rhsolver.hpp"

#include <gtest/gtest.h>

using namespace mbrh;

namespace {

double mat_err(const Mat2& a, const Mat2& b) { return max_abs(a - b); }

ContourSigma real_line(double a = -20.0, double b = 20.0, int panels = 24) {
  ContourConfig cfg;
  cfg.window_min = a;
  cfg.window_max = b;
  cfg.panels = panels;
  return contour_build(cfg);
}

ContourSigma circles_only(const std::vector<SolitonPole>& poles, double radius = 0.2, int n = 64) {
  ContourConfig cfg;
  cfg.panels = 0;
  cfg.circles = soliton_circles(poles, radius, n);
  return contour_build(cfg);
}

}  // namespace

TEST(Contour, WeightsAndClosure) {
  const ContourSigma c = real_line(-20.0, 20.0);
  EXPECT_EQ(c.size(), 24u * 16u);
  for (const Panel& p : c.panels) {
    cplx s = 0.0;
    for (cplx w : p.weights) s += w;
    EXPECT_LT(std::abs(s - (p.b - p.a)), 1e-13);
  }
  ContourConfig cfg;
  cfg.circles = {{cplx(0.0, 0.5), 0.2, 32}, {cplx(0.0, -0.5), 0.2, 32}};
  const ContourSigma cc = contour_build(cfg);
  EXPECT_TRUE(cc.conjugation_closed());
  for (const Panel& p : cc.panels)
    if (p.kind == PanelKind::Circle) {
      cplx s = 0.0;
      for (cplx w : p.weights) s += w;
      EXPECT_LT(std::abs(s), 1e-14);
    }
  cfg.circles.pop_back();
  EXPECT_FALSE(contour_build(cfg).conjugation_closed());
  ContourConfig empty;
  empty.panels = 0;
  EXPECT_THROW(contour_build(empty), Error);
}

TEST(Contour, GradedPanelsFollowWeight) {
  ContourConfig cfg;
  cfg.panel_weight = [](double l) { return 20.0 * std::exp(-l * l); };
  const ContourSigma c = contour_build(cfg);
  double inner = 1e9, outer = 0.0;
  for (const Panel& p : c.panels) {
    const double w = p.b - p.a;
    if (std::abs(0.5 * (p.a + p.b)) < 1.0) inner = std::min(inner, w);
    else if (std::abs(0.5 * (p.a + p.b)) > 10.0) outer = std::max(outer, w);
  }
  EXPECT_LT(inner, 0.5 * outer);
  EXPECT_DOUBLE_EQ(c.panels.front().a, -20.0);
  EXPECT_DOUBLE_EQ(c.panels.back().b, 20.0);
}

TEST(CauchyMatrix, RealLineAgainstClosedForm) {
  // f(s) = 1/(s - z0) on [-20, 20]: C+ f(l) = (Lg(l+) - Lg(z0)) / (2 pi i (l - z0)),
  // Lg(z) = log((20 - z)/(-20 - z)).
  const ContourSigma c = real_line();
  const PanelRule rule(16);
  const Eigen::MatrixXcd W = cauchy_plus_matrix(c, rule);
  const auto z = c.nodes();
  for (cplx z0 : {cplx(0.3, -2.5), cplx(-2.0, 3.0), cplx(19.5, -2.5)}) {
    Eigen::VectorXcd f(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) f(k) = 1.0 / (z[k] - z0);
    const Eigen::VectorXcd Cf = W * f;
    auto Lg = [](cplx q) { return std::log((20.0 - q) / (-20.0 - q)); };
    double e = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double l = z[k].real();
      const cplx Lp = std::log((20.0 - l) / (20.0 + l)) + I_unit * pi;
      const cplx ref = (Lp - Lg(z0)) / (2.0 * pi * I_unit * (l - z0));
      e = std::max(e, std::abs(Cf(k) - ref) / (1.0 + std::abs(ref)));
    }
    EXPECT_LT(e, 1e-11) << z0;
  }
}

TEST(CauchyMatrix, ClockwiseCircleReproducesExteriorFunctions) {
  ContourConfig cfg;
  cfg.panels = 0;
  cfg.circles = {{cplx(0.2, 0.7), 0.3, 48}};
  const ContourSigma c = contour_build(cfg);
  const Eigen::MatrixXcd W = cauchy_plus_matrix(c, PanelRule(16));
  const auto z = c.nodes();
  const cplx w0(0.25, 0.68);
  Eigen::VectorXcd f(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) f(k) = 1.0 / (z[k] - w0);
  // analytic outside and O(1/z): C+ f = f on the exterior side
  EXPECT_LT((W * f - f).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CauchyRow, OffContourAndSides) {
  const ContourSigma c = real_line(-5.0, 5.0, 10);
  const PanelRule rule(16);
  const auto z = c.nodes();
  auto apply = [&](cplx t, int side) {
    const Eigen::VectorXcd r = cauchy_row(c, rule, t, side);
    cplx s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) s += r(k) * std::exp(-z[k] * z[k]);
    return s;
  };
  // Plemelj: C+ - C- = f on the contour, and continuity of C+ from above
  for (double l : {0.123, -1.7}) {
    EXPECT_LT(std::abs(apply(l, +1) - apply(l, -1) - std::exp(-l * l)), 1e-13);
    EXPECT_LT(std::abs(apply(cplx(l, 1e-9), 0) - apply(l, +1)), 1e-7);
  }
  EXPECT_THROW(apply(0.3, 0), Error);
}

TEST(SieSolve, IdentityJumpGivesZeroField) {
  const ContourSigma c = real_line();
  const auto p = BroadeningProfile::lorentzian(1.0, -1);
  const JumpData d = contour_jump_wholeline(c, [](double) { return cplx(0.0); }, 1.0, 2.0, p);
  const RHResult r = sie_solve(c, d);
  EXPECT_EQ(std::abs(r.E), 0.0);
  for (const Mat2& P : r.P) EXPECT_LT(mat_err(P, identity2()), 1e-15);
}

TEST(SieSolve, BornLimit) {
  const auto p = BroadeningProfile::lorentzian(1.0, -1);
  auto r = [](double l) { return cplx(0.01 * std::exp(-l * l)); };
  const ContourSigma c = real_line(-8.0, 8.0, 16);
  const SieSolver solver(c);
  for (auto [t, x] : {std::pair{0.3, 0.0}, std::pair{1.0, 1.5}, std::pair{-0.5, 3.0}}) {
    const RHResult res = solver.solve(contour_jump_wholeline(c, r, t, x, p));
    const cplx born = (2.0 / pi) * integrate_complex(
                                       [&](double l) {
                                         const EtaValues v = eta_boundary(p, l);
                                         return r(l) * std::exp(-2.0 * I_unit * l * t +
                                                                2.0 * I_unit * x * v.eta_plus);
                                       },
                                       -8.0, 8.0, 1e-13, 20);
    EXPECT_LT(std::abs(res.E - born) / std::abs(born), 0.05) << t << " " << x;
    EXPECT_LT(std::abs(res.E - res.E_moment), 1e-14);
    EXPECT_LT(res.antihermitian_error, 1e-12);
    EXPECT_LE(res.residual, 1e-10);
  }
}

TEST(SieSolve, NodeDoublingConverges) {
  const auto p = BroadeningProfile::lorentzian(1.0, -1);
  auto r = [](double l) { return 0.4 * std::exp(-l * l) * std::polar(1.0, l); };
  const ContourSigma c1 = real_line(-20.0, 20.0, 24), c2 = real_line(-20.0, 20.0, 48);
  for (auto [t, x] : {std::pair{0.5, 0.5}, std::pair{2.0, 3.0}}) {
    const cplx e1 = sie_solve(c1, contour_jump_wholeline(c1, r, t, x, p)).E;
    const cplx e2 = sie_solve(c2, contour_jump_wholeline(c2, r, t, x, p)).E;
    EXPECT_LE(std::abs(e1 - e2), 1e-6);
    EXPECT_GT(std::abs(e1), 1e-3);
  }
}

TEST(SieSolve, PosdefViolationRejected) {
  const ContourSigma c = real_line(-1.0, 1.0, 1);
  JumpData d;
  d.cls = ProblemClass::WholeLine;
  for (cplx z : c.nodes()) {
    d.nodes.push_back(z);
    d.J.push_back(make_mat(-1.0, 0.0, 0.0, -1.0));
  }
  EXPECT_THROW(sie_solve(c, d), Error);
}

TEST(Soliton, ClosedFormAmplitudeAndSpeed) {
  const auto p = BroadeningProfile::delta_approx(1e-6, -1);
  const double nu = 0.5;
  const SolitonPole s = soliton_pole(nu, 5.0);
  double best = 0.0, tbest = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double t = 5.0 * k / 1000.0;
    const double a = std::abs(soliton_closed_form({s}, t, 0.0, p).E);
    if (a > best) best = a, tbest = t;
  }
  EXPECT_NEAR(best, 4.0 * nu, 1e-5);
  EXPECT_NEAR(tbest, 5.0, 5e-3);
  // |E| = 4 nu sech(2 nu (t - 5) - 2 x (nu + 1/(4 nu)))
  for (auto [t, x] : {std::pair{3.0, 0.5}, std::pair{9.0, 2.0}}) {
    const double arg = 2.0 * nu * (t - 5.0) - 2.0 * x * (nu + 1.0 / (4.0 * nu));
    EXPECT_NEAR(std::abs(soliton_closed_form({s}, t, x, p).E), 4.0 * nu / std::cosh(arg), 1e-6);
  }
  const SolitonSolution sol = soliton_closed_form({s}, 4.0, 1.0, p);
  const Mat2 M = sol.M(cplx(0.3, 0.1));
  EXPECT_LT(std::abs(det2(M) - 1.0), 1e-12);
}

TEST(Soliton, TwoPolesAndSingularSystem) {
  const auto p = BroadeningProfile::delta_approx(1e-6, -1);
  const std::vector<SolitonPole> two{soliton_pole(0.5, 3.0), soliton_pole(0.8, 6.0, 1.0)};
  const SolitonSolution s = soliton_closed_form(two, 4.0, 0.5, p);
  EXPECT_TRUE(std::isfinite(std::abs(s.E)));
  EXPECT_LT(std::abs(det2(s.M(cplx(0.1, 0.2))) - 1.0), 1e-10);
  const std::vector<SolitonPole> dup{soliton_pole(0.5, 3.0), soliton_pole(0.5, 3.0)};
  EXPECT_THROW(soliton_closed_form(dup, 1.0, 0.0, p), Error);
}

TEST(Soliton, CircleSieMatchesClosedForm) {
  const auto p = BroadeningProfile::delta_approx(1e-6, -1);
  const std::vector<SolitonPole> poles{soliton_pole(0.5, 3.0), soliton_pole(0.9, 5.0, 0.4)};
  const SieSolver solver(circles_only(poles, 0.15, 64));
  for (auto [t, x] : {std::pair{2.0, 0.0}, std::pair{4.0, 1.0}, std::pair{6.0, 0.3}}) {
    const JumpData d = soliton_jump(solver.contour(), poles, t, x, p);
    EXPECT_LT(d.schwartz_error(), 1e-12);
    const RHResult r = solver.solve(d);
    const SolitonSolution s = soliton_closed_form(poles, t, x, p);
    EXPECT_LT(std::abs(r.E - s.E), 1e-3);
    EXPECT_LT(std::abs(r.E - s.E), 1e-9);
    for (cplx z : {cplx(0.7, 0.0), cplx(-1.0, 0.3), cplx(2.0, -1.0)})
      EXPECT_LT(mat_err(solver.evaluate_M(r, d, z), s.M(z)), 1e-9);
  }
}

TEST(EvaluateM, DecayAndDeterminant) {
  const auto p = BroadeningProfile::lorentzian(1.0, -1);
  auto rf = [](double l) { return 0.3 * std::exp(-l * l); };
  const ContourSigma c = real_line(-10.0, 10.0, 20);
  const SieSolver solver(c);
  const JumpData d = contour_jump_wholeline(c, rf, 1.0, 1.0, p);
  const RHResult r = solver.solve(d);
  for (cplx z : {cplx(0.5, 0.3), cplx(-1.0, -0.01), cplx(3.0, 2.0)})
    EXPECT_LT(std::abs(det2(solver.evaluate_M(r, d, z)) - 1.0), 1e-6);
  const cplx big(0.0, 1e4);
  EXPECT_LT(mat_err(big * (solver.evaluate_M(r, d, big) - identity2()), r.m), 1e-3);
  const auto [Mp, Mm] = solver.boundary_values(r, d, 0.4321);
  EXPECT_LT(mat_err(Mm, Mp * jump_wholeline(1.0, 1.0, 0.4321, rf(0.4321), p)), 1e-10);
}

TEST(ReconstructF, SolitonMediumMatchesClosedForm) {
  const auto p = BroadeningProfile::rectangular(0.05, -1);
  const std::vector<SolitonPole> poles{soliton_pole(0.5, 4.0)};
  const SieSolver solver(circles_only(poles, 0.15, 64));
  const double t = 4.0, h = 1e-3;
  for (double x : {-0.5, 0.0, 3.0}) {
    std::array<RHResult, 3> r;
    std::array<JumpData, 3> d;
    for (int k = 0; k < 3; ++k) {
      d[k] = soliton_jump(solver.contour(), poles, t, x + (k - 1) * h, p);
      r[k] = solver.solve(d[k]);
    }
    for (double l : {0.0, 0.03}) {
      const Mat2 F = reconstruct_F(solver, r, d, h, l, p);
      const Mat2 M = soliton_closed_form(poles, t, x, p).M(l);
      EXPECT_LT(mat_err(F, M * sigma3() * inv2(M)), 1e-6);
      const MediumCertificate cert = certify_medium(F);
      EXPECT_LT(cert.hermitian_traceless, 1e-6);
      EXPECT_LT(cert.conservation, 1e-4);
    }
    EXPECT_THROW(reconstruct_F(solver, r, d, h, 0.2, p), Error);
  }
}

TEST(MixedPipeline, SechBoundaryPulseReproduced) {
  ScenarioData sc = ScenarioData::trivial_data(2.0, 30.0);
  sc.E_in = PulseSpec::sech(2.0, 15.0);
  const auto p = BroadeningProfile::lorentzian(1.0, -1);
  SpectralProblem pr(sc, p);
  const auto poles = table_poles({.poles = locate_a_zeros(pr, {-2.0, 2.0, 0.05, 2.0}).poles});
  ASSERT_EQ(poles.size(), 1u);
  ContourConfig cfg;
  cfg.window_min = -6.0;
  cfg.window_max = 6.0;
  cfg.panels = 12;
  cfg.circles = soliton_circles(poles, 0.2, 64);
  const SieSolver solver(contour_build(cfg));
  const MixedJumpTable tab(pr, solver.contour().real_nodes(), {0.0, 1.0});
  for (double t : {12.0, 15.0, 16.5}) {
    const RHResult r0 = solver.solve(contour_jump(solver.contour(), tab, t, 0.0, poles));
    EXPECT_LT(std::abs(r0.E - sc.E_in(t)), 1e-5) << t;
    const RHResult r1 = solver.solve(contour_jump(solver.contour(), tab, t, 1.0, poles));
    EXPECT_LT(std::abs(r1.E - soliton_closed_form(poles, t, 1.0, p).E), 1e-5) << t;
  }
}
