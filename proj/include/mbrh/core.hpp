// core.hpp - shared scalar/matrix types, error type and small 2x2 helpers
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbrh {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I_unit{0.0, 1.0};

enum class ErrorCode {
  ZeroMass,
  NonDecaying,
  TooCloseToAxis,
  PrincipalValueFailure,
  GridCoverage,
  StencilTooCoarse,
  ODEStepRejected,
  DecayViolation,
  MediumNotAsymptotic,
  SpectralSingularity,
  CountMismatch,
  SingularK,
  RegularityViolation,
  EmptyContour,
  IllConditioned,
  PosdefViolated,
  TooCloseToContour,
  SingularResidueSystem,
  WeightVanishes,
  CFLViolation,
  ConstraintDrift,
  SchemaError,
  InvariantError,
  IOError,
  InvalidArgument,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::NonDecaying: return "NonDecaying";
    case ErrorCode::TooCloseToAxis: return "TooCloseToAxis";
    case ErrorCode::PrincipalValueFailure: return "PrincipalValueFailure";
    case ErrorCode::GridCoverage: return "GridCoverage";
    case ErrorCode::StencilTooCoarse: return "StencilTooCoarse";
    case ErrorCode::ODEStepRejected: return "ODEStepRejected";
    case ErrorCode::DecayViolation: return "DecayViolation";
    case ErrorCode::MediumNotAsymptotic: return "MediumNotAsymptotic";
    case ErrorCode::SpectralSingularity: return "SpectralSingularity";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::SingularK: return "SingularK";
    case ErrorCode::RegularityViolation: return "RegularityViolation";
    case ErrorCode::EmptyContour: return "EmptyContour";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::PosdefViolated: return "PosdefViolated";
    case ErrorCode::TooCloseToContour: return "TooCloseToContour";
    case ErrorCode::SingularResidueSystem: return "SingularResidueSystem";
    case ErrorCode::WeightVanishes: return "WeightVanishes";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::ConstraintDrift: return "ConstraintDrift";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantError: return "InvariantError";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Error raised by every module; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for the classes the CLI reports as numerical (exit 3) rather than
/// configuration (exit 2) failures.
inline bool is_numerical(ErrorCode c) {
  switch (c) {
    case ErrorCode::SchemaError:
    case ErrorCode::InvariantError:
    case ErrorCode::IOError:
    case ErrorCode::InvalidArgument:
      return false;
    default:
      return true;
  }
}

// ---------------------------------------------------------------------------
// 2x2 algebra

inline Mat2 identity2() { return Mat2::Identity(); }

inline Mat2 sigma3() {
  Mat2 s;
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

inline Mat2 sigma2() {
  Mat2 s;
  s << 0.0, I_unit, -I_unit, 0.0;
  return s;
}

inline Mat2 make_mat(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

/// sigma2 * conj(A) * sigma2
inline Mat2 sigma2_conj(const Mat2& a) {
  return make_mat(std::conj(a(1, 1)), -std::conj(a(1, 0)), -std::conj(a(0, 1)),
                  std::conj(a(0, 0)));
}

inline cplx det2(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

/// Inverse via the adjugate; exact for unimodular matrices up to rounding.
inline Mat2 inv2(const Mat2& a) {
  const cplx d = det2(a);
  return make_mat(a(1, 1) / d, -a(0, 1) / d, -a(1, 0) / d, a(0, 0) / d);
}

/// exp(i*theta*sigma3) for complex theta.
inline Mat2 exp_sigma3(cplx theta) {
  return make_mat(std::exp(I_unit * theta), 0.0, 0.0, std::exp(-I_unit * theta));
}

/// Smallest eigenvalue of the Hermitian part (A + A^dagger)/2.
inline double min_hermitian_eig(const Mat2& a) {
  const Mat2 h = 0.5 * (a + a.adjoint());
  const double p = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double q = 0.5 * (h(0, 0).real() - h(1, 1).real());
  return p - std::sqrt(q * q + std::norm(h(0, 1)));
}

inline double max_abs(const Mat2& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace mbrh
