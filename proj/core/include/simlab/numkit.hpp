#pragma once

#include "simlab/types.hpp"

namespace simlab::numkit {

/// Largest singular value.
double op_norm(const Matrix& t);

/// Full eigenvalue list (unsorted) of a square matrix, via complex Schur reduction.
Vector eigenvalues(const Matrix& t);

/// Largest eigenvalue modulus.
double spectral_radius(const Matrix& t);

/// max Re(lambda) over the spectrum; the growth bound of (e^{tA})_{t>=0}.
double spectral_abscissa(const Matrix& a);

/// lambda_max((A + A*)/2); equals d/dt ||e^{tA}|| at t=0+.
double numerical_abscissa(const Matrix& a);

/// Kronecker product, block (i,j) = a_ij * B.
Matrix kron(const Matrix& a, const Matrix& b);

/// e^{tA} by scaling-and-squaring with a Pade core.
Matrix matexp(const Matrix& a, double t);

/// Solve B*X + XB = -W for Hermitian X >= 0, by Schur reduction and
/// triangular back-substitution. Requires the spectral abscissa of B to be
/// strictly negative and W >= 0.
Matrix lyap_solve(const Matrix& b, const Matrix& w, const TolerancePolicy& tol = {});

/// Smallest eigenvalue of a Hermitian matrix.
double min_eig(const Matrix& h, const TolerancePolicy& tol = {});

/// lambda_max(P)/lambda_min(P) of a positive definite Hermitian P.
double cond_pd(const Matrix& p, const TolerancePolicy& tol = {});

/// T^n by repeated left-history multiplication (n >= 0).
Matrix matrix_power(const Matrix& t, long n);

}  // namespace simlab::numkit
