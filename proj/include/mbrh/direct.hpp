// direct.hpp - characteristic-grid integrator for the Maxwell-Bloch system,
// used as the independent check on RH reconstructions.
#pragma once

#include "mbrh/medium.hpp"
#include "mbrh/ode.hpp"
#include "mbrh/lax.hpp"
#include "mbrh/quadrature.hpp"
#include "mbrh/scenario.hpp"

#include <mutex>
#include <optional>

namespace mbrh {

struct DirectConfig {
  double dt = 0.05;
  double dx = 0.05;
  std::size_t nt = 201;  // t_i = i dt
  std::size_t nx = 201;  // x_j = j dx
  int lambda_nodes = 200;
  std::optional<LambdaQuadrature> quad;  // overrides lambda_nodes
  bool transport = true;                 // false: E frozen at its initial values
};

/// One exact Bloch step: F <- U F U^dagger, U = exp(-h (i lambda sigma3 + H(E))).
inline Mat2 bloch_propagator(double lambda, cplx E, double h) {
  return expm2(-h * (I_unit * lambda * sigma3() + coupling_matrix(E)));
}

/// Integrates E_t + E_x = <rho>, rho_t + 2 i lambda rho = N E, N_t = -(E* rho + E rho*)/2
/// on t, x >= 0 with E(t, 0) = E_in(t), (E, rho, N)(0, x) from the scenario.
inline FieldState integrate_direct(const ScenarioData& sc, const BroadeningProfile& p,
                                   const DirectConfig& cfg) {
  if (!(cfg.dt > 0.0) || std::abs(cfg.dt - cfg.dx) > 1e-14 * cfg.dt)
    throw Error(ErrorCode::CFLViolation, "direct integrator needs dt = dx > 0");
  if (cfg.nt < 1 || cfg.nx < 1) throw Error(ErrorCode::InvalidArgument, "empty direct grid");
  const double h = cfg.dt;
  const LambdaQuadrature q = cfg.quad ? *cfg.quad : lambda_quadrature(p, cfg.lambda_nodes);
  check_coverage(q, p);
  std::vector<double> tg(cfg.nt), xg(cfg.nx);
  for (std::size_t i = 0; i < cfg.nt; ++i) tg[i] = i * h;
  for (std::size_t j = 0; j < cfg.nx; ++j) xg[j] = j * h;
  FieldState st(tg, xg, q);
  const std::size_t nl = q.size();

  auto average = [&](std::size_t i, std::size_t j) {
    cplx a = 0.0;
    for (std::size_t k = 0; k < nl; ++k) a += q.weights[k] * st.rho(i, j, k);
    return a;
  };

  for (std::size_t j = 0; j < cfg.nx; ++j) {
    st.E(0, j) = j == 0 ? sc.E_in(0.0) : sc.E0(xg[j]);
    for (std::size_t k = 0; k < nl; ++k) {
      st.rho(0, j, k) = sc.rho0(xg[j], q.nodes[k]);
      st.N(0, j, k) = sc.N0(xg[j], q.nodes[k]);
    }
  }
  std::vector<cplx> avg_prev(cfg.nx), avg_next(cfg.nx);
  for (std::size_t j = 0; j < cfg.nx; ++j) avg_prev[j] = average(0, j);

  double drift = st.max_conservation_error();
  for (std::size_t i = 0; i + 1 < cfg.nt; ++i) {
    const std::size_t n = i + 1;
    double step_drift = 0.0;
    std::mutex mu;
    parallel_for(cfg.nx, [&](std::size_t j) {
      auto rotate = [&](cplx E_new) {
        const cplx Em = 0.5 * (st.E(i, j) + E_new);
        for (std::size_t k = 0; k < nl; ++k) {
          if (Em == 0.0) {  // free precession: N untouched
            st.rho(n, j, k) = std::polar(1.0, -2.0 * q.nodes[k] * h) * st.rho(i, j, k);
            st.N(n, j, k) = st.N(i, j, k);
            continue;
          }
          const Mat2 U = bloch_propagator(q.nodes[k], Em, h);
          const Mat2 F = U * medium_matrix(st.N(i, j, k), st.rho(i, j, k)) * U.adjoint();
          st.rho(n, j, k) = 0.5 * (F(0, 1) + std::conj(F(1, 0)));
          st.N(n, j, k) = 0.5 * (F(0, 0) - F(1, 1)).real();
        }
        return average(n, j);
      };
      cplx E_new;
      if (j == 0) {
        E_new = sc.E_in(tg[n]);
        avg_next[j] = rotate(E_new);
      } else if (!cfg.transport) {
        E_new = st.E(i, j);
        avg_next[j] = rotate(E_new);
      } else {
        // trapezoid along the characteristic from (t_i, x_{j-1})
        const cplx base = st.E(i, j - 1) + 0.5 * h * avg_prev[j - 1];
        E_new = base + 0.5 * h * avg_prev[j - 1];
        for (int it = 0; it < 60; ++it) {
          const cplx a = rotate(E_new);
          const cplx next = base + 0.5 * h * a;
          const bool done = std::abs(next - E_new) <= 1e-15 * (1.0 + std::abs(next));
          E_new = next;
          if (done) break;
        }
        avg_next[j] = rotate(E_new);
      }
      st.E(n, j) = E_new;
      double d = 0.0;
      for (std::size_t k = 0; k < nl; ++k)
        d = std::max(d, std::abs(st.N(n, j, k) * st.N(n, j, k) + std::norm(st.rho(n, j, k)) - 1.0));
      std::lock_guard<std::mutex> lock(mu);
      step_drift = std::max(step_drift, d);
    });
    drift = std::max(drift, step_drift);
    if (drift > 1e-6)
      throw Error(ErrorCode::ConstraintDrift,
                  "N^2 + |rho|^2 drifted by " + std::to_string(drift) + " at t = " +
                      std::to_string(tg[n]));
    avg_prev.swap(avg_next);
  }
  return st;
}

}  // namespace mbrh
