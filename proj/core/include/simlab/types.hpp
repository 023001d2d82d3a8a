#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace simlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class ErrorCode {
  NonFinite,
  NotSquare,
  NotHermitian,
  NotPositive,
  Unstable,
  SingularPencil,
  RadiusNotLessThanOne,
  RadiusBelowOne,
  RateBelowAbscissa,
  BudgetExceeded,
  ZeroPolynomial,
  ZeroFactor,
  DimensionMismatch,
  NoPeripheralVector,
  NotGridAligned,
  NegativeTime,
  NonCommuting,
  CertificateInvalid,
  OneInSpectrum,
  EmptySample,
  BadParams,
  ConfigError,
  IoError,
  ParseError,
  UnknownSuite,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

/// Numerical knobs shared by every solver in the library. Defaults sit one
/// order of magnitude above double-precision Schur backward error at the
/// matrix sizes this library targets (dims <= 200).
struct TolerancePolicy {
  double tol_herm = 1e-10;  // Hermitian symmetry slack
  double tol_psd = 1e-9;    // eigenvalue slack in semidefinite tests
  double tol_rel = 1e-8;    // relative accuracy of norms, radii, bisections
  int max_iter = 400;       // iteration budget of the feasibility engine

  void validate() const {
    if (!(tol_herm > 0.0) || !(tol_psd > 0.0) || !(tol_rel > 0.0))
      fail(ErrorCode::BadParams, "tolerances must be strictly positive");
    if (max_iter < 1) fail(ErrorCode::BadParams, "max_iter must be >= 1");
  }
};

inline bool is_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) fail(ErrorCode::NonFinite, std::string(who) + ": matrix has NaN/Inf entries");
}

inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) fail(ErrorCode::NotSquare, std::string(who) + ": matrix is not square");
}

inline bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Hermitian part (M + M*)/2.
inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline bool is_real(const Matrix& m, double tol = 0.0) {
  return m.imag().cwiseAbs().maxCoeff() <= tol;
}

}  // namespace simlab
