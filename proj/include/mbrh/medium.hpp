// medium.hpp - lambda quadrature against n, the medium slice (N, rho) at a
// fixed (t, x), the averaged polarisation <rho> and the FieldState container.
#pragma once

#include "mbrh/broadening.hpp"

#include <Eigen/Dense>

namespace mbrh {

/// Nodes s_k and weights w_k with sum_k w_k f(s_k) ~ integral n(s) f(s) ds.
/// The weights already carry n (and therefore its sign).
struct LambdaQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Profile-adapted rule:
///   box shapes  Gauss-Legendre on [-eps, eps]
///   lorentzian  lambda = l tan(theta), Gauss-Legendre in theta (n dlambda = sign dtheta / pi)
///   tabulated   trapezoid on the table grid (count ignored)
inline LambdaQuadrature lambda_quadrature(const BroadeningProfile& p, int count = 200) {
  LambdaQuadrature q;
  switch (p.shape) {
    case Shape::Rectangular:
    case Shape::DeltaApprox: {
      const GaussRule g = gauss_legendre(count);
      for (int k = 0; k < count; ++k) {
        q.nodes.push_back(p.width * g.nodes[k]);
        q.weights.push_back(p.scale * p.width * g.weights[k]);
      }
      break;
    }
    case Shape::Lorentzian: {
      const GaussRule g = gauss_legendre(count);
      // scale = sign for a normalised Lorentzian; keep it general
      for (int k = 0; k < count; ++k) {
        q.nodes.push_back(p.width * std::tan(0.5 * pi * g.nodes[k]));
        q.weights.push_back(0.5 * p.scale * g.weights[k]);
      }
      break;
    }
    case Shape::Tabulated: {
      const std::size_t n = p.grid.size();
      for (std::size_t k = 0; k < n; ++k) {
        const double left = k > 0 ? p.grid[k] - p.grid[k - 1] : 0.0;
        const double right = k + 1 < n ? p.grid[k + 1] - p.grid[k] : 0.0;
        q.nodes.push_back(p.grid[k]);
        q.weights.push_back(0.5 * (left + right) * p.density(p.grid[k]));
      }
      break;
    }
  }
  return q;
}

/// Trapezoid weights n(s_k) ds on a user grid (strictly increasing).
inline LambdaQuadrature lambda_quadrature_on_grid(const BroadeningProfile& p,
                                                  const std::vector<double>& grid) {
  if (grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "lambda grid needs >= 2 points");
  LambdaQuadrature q;
  const std::size_t n = grid.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "lambda grid must be strictly increasing");
    const double left = k > 0 ? grid[k] - grid[k - 1] : 0.0;
    const double right = k + 1 < n ? grid[k + 1] - grid[k] : 0.0;
    q.nodes.push_back(grid[k]);
    q.weights.push_back(0.5 * (left + right) * p.density(grid[k]));
  }
  return q;
}

/// Fraction of |n| mass represented by the rule.
inline double coverage_ratio(const LambdaQuadrature& q, const BroadeningProfile& p) {
  double s = 0.0;
  for (double w : q.weights) s += std::abs(w);
  return s / std::abs(p.mass());
}

inline void check_coverage(const LambdaQuadrature& q, const BroadeningProfile& p) {
  const double r = coverage_ratio(q, p);
  if (r < 0.999)
    throw Error(ErrorCode::GridCoverage,
                "lambda grid covers only " + std::to_string(r) + " of the |n| mass");
}

/// Medium state (N, rho) at fixed (t, x) on the nodes of a LambdaQuadrature.
struct MediumSlice {
  LambdaQuadrature quad;
  std::vector<double> N;
  std::vector<cplx> rho;

  static MediumSlice ground(const LambdaQuadrature& q) {
    return {q, std::vector<double>(q.size(), 1.0), std::vector<cplx>(q.size(), 0.0)};
  }
  /// F = [[N, rho], [rho*, -N]]
  Mat2 F(std::size_t k) const { return make_mat(N[k], rho[k], std::conj(rho[k]), -N[k]); }
};

inline Mat2 medium_matrix(double N, cplx rho) { return make_mat(N, rho, std::conj(rho), -N); }

/// <rho> = integral n(s) rho(s) ds (Omega = 1).
inline cplx rho_average(const MediumSlice& s, const BroadeningProfile& p) {
  check_coverage(s.quad, p);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < s.quad.size(); ++k) acc += s.quad.weights[k] * s.rho[k];
  return acc;
}

/// max over the nodes of |N^2 + |rho|^2 - 1|.
inline double conservation_check(const MediumSlice& s) {
  double d = 0.0;
  for (std::size_t k = 0; k < s.N.size(); ++k)
    d = std::max(d, std::abs(s.N[k] * s.N[k] + std::norm(s.rho[k]) - 1.0));
  return d;
}

/// E on (t, x) and (rho, N) on (t, x, lambda), lambda on a shared quadrature.
struct FieldState {
  std::vector<double> t, x;
  LambdaQuadrature quad;
  Eigen::MatrixXcd E;          // E(i, j) = E(t_i, x_j)
  std::vector<cplx> rho_data;  // index (i * nx + j) * nl + k
  std::vector<double> N_data;

  FieldState() = default;
  FieldState(std::vector<double> tg, std::vector<double> xg, LambdaQuadrature q)
      : t(std::move(tg)), x(std::move(xg)), quad(std::move(q)) {
    E = Eigen::MatrixXcd::Zero(t.size(), x.size());
    rho_data.assign(t.size() * x.size() * quad.size(), 0.0);
    N_data.assign(t.size() * x.size() * quad.size(), 1.0);
  }

  std::size_t nt() const { return t.size(); }
  std::size_t nx() const { return x.size(); }
  std::size_t nl() const { return quad.size(); }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * nx() + j) * nl() + k;
  }
  cplx& rho(std::size_t i, std::size_t j, std::size_t k) { return rho_data[index(i, j, k)]; }
  cplx rho(std::size_t i, std::size_t j, std::size_t k) const { return rho_data[index(i, j, k)]; }
  double& N(std::size_t i, std::size_t j, std::size_t k) { return N_data[index(i, j, k)]; }
  double N(std::size_t i, std::size_t j, std::size_t k) const { return N_data[index(i, j, k)]; }

  MediumSlice slice(std::size_t i, std::size_t j) const {
    MediumSlice s{quad, std::vector<double>(nl()), std::vector<cplx>(nl())};
    for (std::size_t k = 0; k < nl(); ++k) {
      s.N[k] = N(i, j, k);
      s.rho[k] = rho(i, j, k);
    }
    return s;
  }

  double max_conservation_error() const {
    double d = 0.0;
    for (std::size_t m = 0; m < N_data.size(); ++m)
      d = std::max(d, std::abs(N_data[m] * N_data[m] + std::norm(rho_data[m]) - 1.0));
    return d;
  }
};

}  // namespace mbrh
