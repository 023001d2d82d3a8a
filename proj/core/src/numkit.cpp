#include "simlab/numkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace simlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::SingularPencil: return "SingularPencil";
    case ErrorCode::RadiusNotLessThanOne: return "RadiusNotLessThanOne";
    case ErrorCode::RadiusBelowOne: return "RadiusBelowOne";
    case ErrorCode::RateBelowAbscissa: return "RateBelowAbscissa";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::ZeroFactor: return "ZeroFactor";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoPeripheralVector: return "NoPeripheralVector";
    case ErrorCode::NotGridAligned: return "NotGridAligned";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::NonCommuting: return "NonCommuting";
    case ErrorCode::CertificateInvalid: return "CertificateInvalid";
    case ErrorCode::OneInSpectrum: return "OneInSpectrum";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
  }
  return "Unknown";
}

}  // namespace simlab

namespace simlab::numkit {

double op_norm(const Matrix& t) {
  require_finite(t, "op_norm");
  if (t.rows() == 0 || t.cols() == 0) return 0.0;
  if (t.rows() == 1 && t.cols() == 1) return std::abs(t(0, 0));
  // Singular values of T = sqrt of eigenvalues of the Hermitian T*T; the
  // self-adjoint solver is backward stable and cheaper than a full SVD here.
  Matrix gram = t.adjoint() * t;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(gram), Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, lmax));
}

Vector eigenvalues(const Matrix& t) {
  require_finite(t, "eigenvalues");
  require_square(t, "eigenvalues");
  if (t.rows() == 0) return Vector(0);
  Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) fail(ErrorCode::SingularPencil, "eigenvalue iteration failed");
  return es.eigenvalues();
}

double spectral_radius(const Matrix& t) {
  require_square(t, "spectral_radius");
  return eigenvalues(t).cwiseAbs().maxCoeff();
}

double spectral_abscissa(const Matrix& a) {
  require_square(a, "spectral_abscissa");
  return eigenvalues(a).real().maxCoeff();
}

double numerical_abscissa(const Matrix& a) {
  require_square(a, "numerical_abscissa");
  require_finite(a, "numerical_abscissa");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  require_finite(a, "kron");
  require_finite(b, "kron");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix matexp(const Matrix& a, double t) {
  require_square(a, "matexp");
  require_finite(a, "matexp");
  if (t < 0.0) fail(ErrorCode::NegativeTime, "matexp: t must be >= 0");
  if (t == 0.0 || a.rows() == 0) return Matrix::Identity(a.rows(), a.cols());
  Matrix ta = t * a;
  return ta.exp();
}

Matrix lyap_solve(const Matrix& b, const Matrix& w, const TolerancePolicy& tol) {
  tol.validate();
  require_square(b, "lyap_solve");
  require_finite(b, "lyap_solve");
  if (w.rows() != b.rows() || w.cols() != b.cols())
    fail(ErrorCode::DimensionMismatch, "lyap_solve: W must match B");
  if (!is_hermitian(w, tol.tol_herm)) fail(ErrorCode::NotHermitian, "lyap_solve: W not Hermitian");

  const Eigen::Index n = b.rows();
  Eigen::ComplexSchur<Matrix> schur(b);
  if (schur.info() != Eigen::Success) fail(ErrorCode::SingularPencil, "lyap_solve: Schur failed");
  const Matrix& u = schur.matrixU();
  const Matrix& tri = schur.matrixT();

  double abscissa = tri.diagonal().real().maxCoeff();
  if (abscissa >= 0.0) fail(ErrorCode::Unstable, "lyap_solve: spectral abscissa of B is >= 0");

  // T* Y + Y T = -What in Schur coordinates, solved column by column:
  // (T* + t_jj I) y_j = -what_j - sum_{k<j} t_kj y_k.
  Matrix what = u.adjoint() * w * u;
  Matrix y = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector rhs = -what.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs -= tri(k, j) * y.col(k);
    Matrix lhs = tri.adjoint();
    lhs.diagonal().array() += tri(j, j);
    double dmin = lhs.diagonal().cwiseAbs().minCoeff();
    if (dmin < 1e-14 * std::max(1.0, tri.cwiseAbs().maxCoeff()))
      fail(ErrorCode::SingularPencil, "lyap_solve: near-singular eigenstructure");
    y.col(j) = lhs.triangularView<Eigen::Lower>().solve(rhs);
  }
  Matrix x = hermitize(u * y * u.adjoint());

  double residual = (b.adjoint() * x + x * b + w).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if (residual > 1e3 * tol.tol_rel * scale * std::max(1.0, x.cwiseAbs().maxCoeff()))
    fail(ErrorCode::SingularPencil, "lyap_solve: residual too large");
  return x;
}

double min_eig(const Matrix& h, const TolerancePolicy& tol) {
  tol.validate();
  require_square(h, "min_eig");
  require_finite(h, "min_eig");
  if (!is_hermitian(h, tol.tol_herm)) fail(ErrorCode::NotHermitian, "min_eig: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double cond_pd(const Matrix& p, const TolerancePolicy& tol) {
  tol.validate();
  require_square(p, "cond_pd");
  require_finite(p, "cond_pd");
  if (!is_hermitian(p, tol.tol_herm)) fail(ErrorCode::NotHermitian, "cond_pd: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(p), Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= tol.tol_psd * std::max(1.0, lmax))
    fail(ErrorCode::NotPositive, "cond_pd: matrix is not positive definite");
  return lmax / lmin;
}

Matrix matrix_power(const Matrix& t, long n) {
  require_square(t, "matrix_power");
  if (n < 0) fail(ErrorCode::BadParams, "matrix_power: negative exponent");
  Matrix acc = Matrix::Identity(t.rows(), t.cols());
  for (long k = 0; k < n; ++k) acc = acc * t;
  return acc;
}

}  // namespace simlab::numkit
