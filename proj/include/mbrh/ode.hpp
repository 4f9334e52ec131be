// ode.hpp - exact 2x2 exponential and a fourth-order Magnus integrator for
// linear systems Y' = A(s) Y with (nearly) traceless A.
#pragma once

#include "mbrh/core.hpp"

namespace mbrh {

/// exp(A) for a 2x2 complex matrix via A^2 = -det(A) I after removing the trace.
inline Mat2 expm2(const Mat2& a) {
  const cplx tr = 0.5 * (a(0, 0) + a(1, 1));
  const Mat2 b = a - tr * identity2();
  const cplx s = std::sqrt(-det2(b));
  cplx ch, sh;  // cosh(s), sinh(s)/s
  if (std::abs(s) < 1e-4) {
    const cplx s2 = s * s;
    ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
    sh = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
  } else {
    ch = std::cosh(s);
    sh = std::sinh(s) / s;
  }
  return std::exp(tr) * (ch * identity2() + sh * b);
}

/// Gauss nodes of the Magnus step as offsets in units of h.
inline constexpr double kMagnusNode1 = 0.21132486540518711775;
inline constexpr double kMagnusNode2 = 0.78867513459481288225;

/// Propagator of a fourth-order Magnus step of length h given A at the two
/// Gauss nodes.
inline Mat2 magnus4_propagator(const Mat2& a1, const Mat2& a2, double h) {
  constexpr double c = 0.28867513459481288225;  // sqrt(3)/6
  return expm2((0.5 * h) * (a1 + a2) + (0.5 * c * h * h) * (a2 * a1 - a1 * a2));
}

template <typename Gen>
Mat2 magnus4_step(Gen&& A, double s, double h) {
  return magnus4_propagator(A(s + kMagnusNode1 * h), A(s + kMagnusNode2 * h), h);
}

/// Integrates Y' = A(s) Y from s0 to s1 (either direction) with about
/// |s1 - s0| / h equal steps; throws ODEStepRejected on non-finite results.
template <typename Gen>
Mat2 magnus4_integrate(Gen&& A, double s0, double s1, const Mat2& y0, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s1 - s0) / h - 1e-9)));
  const double step = (s1 - s0) / n;
  Mat2 y = y0;
  for (int k = 0; k < n; ++k) {
    y = magnus4_step(A, s0 + k * step, step) * y;
    if (!y.allFinite()) throw Error(ErrorCode::ODEStepRejected, "non-finite Magnus step");
  }
  return y;
}

}  // namespace mbrh
