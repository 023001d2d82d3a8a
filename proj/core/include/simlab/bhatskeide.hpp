#pragma once

#include <iosfwd>
#include <vector>

#include "simlab/simcert.hpp"

namespace simlab::bhatskeide {

/// The unit circle split into M equal arcs, each carrying weight 1/M. Grid
/// functions are stored arc-major with the 1/M weight folded into the
/// coefficients, so the constant function is a unit vector.
struct CircleGrid {
  int arcs = 1;

  explicit CircleGrid(int m) : arcs(m) {
    if (m < 1) fail(ErrorCode::BadParams, "CircleGrid needs at least one arc");
  }
};

/// A matrix embedded into a one-parameter family on the circle grid: rotation
/// by t composed with the power T^{floor(t)} or T^{floor(t)+1} depending on
/// the arc.
struct InterpolatedSemigroup {
  Matrix base;
  CircleGrid grid;
  int m_factors = 1;

  InterpolatedSemigroup(Matrix base_, CircleGrid grid_) : base(std::move(base_)), grid(grid_) {
    require_square(base, "InterpolatedSemigroup");
    require_finite(base, "InterpolatedSemigroup");
  }
};

/// The grid-time evaluation; exact block bookkeeping, no quadrature. Requires
/// t * M integral.
Matrix bs_matrix(const InterpolatedSemigroup& s, double t);

/// Same, with the fractional part snapped to the nearest arc; the applied
/// perturbation |t - snapped| is reported through *perturbation.
Matrix bs_matrix_snapped(const InterpolatedSemigroup& s, double t, double* perturbation);

/// || bs_matrix(S, n) - I (x) T^n ||; zero exactly for integer n.
double bs_check_interpolation(const InterpolatedSemigroup& s, int n);

/// Base-space certificate from a certificate of the interpolated family:
/// compression along the constant grid vector.
simcert::MetricCertificate bs_extract_certificate(const simcert::MetricCertificate& p_eq,
                                                  const InterpolatedSemigroup& s,
                                                  const TolerancePolicy& tol = {});

/// Factor k of the commuting multi-parameter interpolation: rotation in
/// circle coordinate k only, powers of base k.
Matrix bs_multifactor(const std::vector<Matrix>& bases, const std::vector<CircleGrid>& grids,
                      double t, int factor_index, const TolerancePolicy& tol = {});

/// CSV time series "t,norm,floor_t,frac_t" over the given grid times.
void write_norm_series(std::ostream& out, const InterpolatedSemigroup& s,
                       const std::vector<double>& times);

}  // namespace simlab::bhatskeide
