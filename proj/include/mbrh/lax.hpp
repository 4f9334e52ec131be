// lax.hpp - AKNS matrices U, V, the Cauchy transform G of the medium matrix F
// and finite-difference residuals of the Maxwell-Bloch system.
#pragma once

#include "mbrh/medium.hpp"

#include <array>
#include <optional>

namespace mbrh {

/// H = (1/2) [[0, E], [-E*, 0]]
inline Mat2 coupling_matrix(cplx E) { return make_mat(0.0, 0.5 * E, -0.5 * std::conj(E), 0.0); }

namespace detail {

/// Linear interpolation of F at lambda on the (ascending) slice nodes,
/// clamped to the end values.
inline Mat2 interpolate_F(const MediumSlice& s, double lambda) {
  const auto& x = s.quad.nodes;
  if (lambda <= x.front()) return s.F(0);
  if (lambda >= x.back()) return s.F(x.size() - 1);
  const std::size_t k = std::upper_bound(x.begin(), x.end(), lambda) - x.begin();
  const double u = (lambda - x[k - 1]) / (x[k] - x[k - 1]);
  return (1.0 - u) * s.F(k - 1) + u * s.F(k);
}

}  // namespace detail

/// G(z) = (1/4) integral F(s) n(s)/(s - z) ds for Im z != 0; for real z with
/// side = +1/-1 the boundary value p.v.(...) +- (pi i/4) F(lambda) n(lambda).
/// The smooth remainder F(s) - F(Re z) is integrated by the slice rule and the
/// constant part analytically, so F = const reproduces (z - eta(z)) F exactly.
/// `F_target` supplies F(Re z) when known; otherwise it is interpolated.
inline Mat2 cauchy_transform_F(const MediumSlice& s, const BroadeningProfile& p, cplx z,
                               int side = 0, const std::optional<Mat2>& F_target = {}) {
  check_coverage(s.quad, p);
  const bool boundary = z.imag() == 0.0;
  if (boundary && side == 0)
    throw Error(ErrorCode::TooCloseToAxis, "real z needs a side tag");
  const Mat2 F0 = F_target ? *F_target : detail::interpolate_F(s, z.real());
  Mat2 acc = Mat2::Zero();
  for (std::size_t k = 0; k < s.quad.size(); ++k) {
    const cplx d = s.quad.nodes[k] - z;
    if (std::abs(d) < 1e-14) continue;
    acc += (s.quad.weights[k] / d) * (s.F(k) - F0);
  }
  acc *= 0.25;
  cplx g;
  if (boundary) {
    const EtaValues v = eta_boundary(p, z.real());
    g = side > 0 ? v.g_plus : v.g_minus;
  } else {
    g = z - eta_eval(p, z);
  }
  return acc + g * F0;
}

struct AknsPair {
  Mat2 U, V;
};

/// U = -i z sigma3 - H,  V = i z sigma3 + H - i G.
inline AknsPair akns_matrices(cplx z, cplx E, const Mat2& G) {
  const Mat2 H = coupling_matrix(E);
  return {-I_unit * z * sigma3() - H, I_unit * z * sigma3() + H - I_unit * G};
}

/// Sup-norm residuals of
///   E_t + E_x - <rho>,  rho_t + 2 i lambda rho - N E,  N_t + (E* rho + E rho*)/2
/// by second-order central differences at the interior stencil points.
inline std::array<double, 3> mb_residual(const FieldState& st, const BroadeningProfile& p) {
  if (st.nt() < 3 || st.nx() < 3)
    throw Error(ErrorCode::StencilTooCoarse, "need at least 3 points per direction");
  const double ht = st.t[1] - st.t[0], hx = st.x[1] - st.x[0];
  for (std::size_t i = 1; i < st.nt(); ++i)
    if (std::abs(st.t[i] - st.t[i - 1] - ht) > 1e-9 * std::abs(ht))
      throw Error(ErrorCode::InvalidArgument, "mb_residual needs a uniform t grid");
  for (std::size_t j = 1; j < st.nx(); ++j)
    if (std::abs(st.x[j] - st.x[j - 1] - hx) > 1e-9 * std::abs(hx))
      throw Error(ErrorCode::InvalidArgument, "mb_residual needs a uniform x grid");
  std::array<double, 3> r{0.0, 0.0, 0.0};
  for (std::size_t i = 1; i + 1 < st.nt(); ++i) {
    for (std::size_t j = 1; j + 1 < st.nx(); ++j) {
      const cplx E = st.E(i, j);
      const cplx Et = (st.E(i + 1, j) - st.E(i - 1, j)) / (2.0 * ht);
      const cplx Ex = (st.E(i, j + 1) - st.E(i, j - 1)) / (2.0 * hx);
      r[0] = std::max(r[0], std::abs(Et + Ex - rho_average(st.slice(i, j), p)));
      for (std::size_t k = 0; k < st.nl(); ++k) {
        const double lam = st.quad.nodes[k];
        const cplx rho = st.rho(i, j, k);
        const double N = st.N(i, j, k);
        const cplx rt = (st.rho(i + 1, j, k) - st.rho(i - 1, j, k)) / (2.0 * ht);
        const double Nt = (st.N(i + 1, j, k) - st.N(i - 1, j, k)) / (2.0 * ht);
        r[1] = std::max(r[1], std::abs(rt + 2.0 * I_unit * lam * rho - N * E));
        r[2] = std::max(r[2], std::abs(Nt + (std::conj(E) * rho).real()));
      }
    }
  }
  return r;
}

}  // namespace mbrh
