// quadrature.hpp - Gauss-Legendre rules, adaptive Gauss-Kronrod wrapper for
// complex integrands, and a small parallel map capped by MB_RH_THREADS.
#pragma once

#include "mbrh/core.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>
#include <utility>

namespace mbrh {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre: n < 1");
  GaussRule r{std::vector<double>(n), std::vector<double>(n)};
  // returns (P_n(x), P_n'(x))
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    // centre node: P_n'(0) from the three-term recurrence at x = 0
    double p0 = 1.0, p1 = 0.0, d0 = 0.0, d1 = 1.0;
    for (int k = 2; k <= n; ++k) {
      const double p2 = (-(k - 1.0) * p0) / k;
      const double d2 = ((2.0 * k - 1.0) * p1 - (k - 1.0) * d0) / k;
      p0 = p1;
      p1 = p2;
      d0 = d1;
      d1 = d2;
    }
    r.nodes[n / 2] = 0.0;
    r.weights[n / 2] = 2.0 / (d1 * d1);
  }
  return r;
}

/// Adaptive 15-point Gauss-Kronrod on [a, b] (either end may be infinite).
/// Real and imaginary parts are integrated separately; `error` receives the
/// summed error estimate.
inline cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b,
                              double tol = 1e-13, unsigned max_depth = 30,
                              double* error = nullptr) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double er = 0.0, ei = 0.0;
  const double re = GK::integrate([&](double s) { return f(s).real(); }, a, b, max_depth, tol, &er);
  const double im = GK::integrate([&](double s) { return f(s).imag(); }, a, b, max_depth, tol, &ei);
  if (error) *error = er + ei;
  return {re, im};
}

/// Number of worker threads: MB_RH_THREADS if set, otherwise hardware
/// concurrency.
inline unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MB_RH_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return n;
}

/// Calls f(i) for i in [0, n). Work is split in contiguous blocks; f must only
/// write to slot i of any shared output.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned nt = std::min<std::size_t>(thread_count(), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace mbrh
