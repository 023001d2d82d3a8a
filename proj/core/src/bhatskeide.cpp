#include "simlab/bhatskeide.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>

#include "simlab/matrix_io.hpp"
#include "simlab/numkit.hpp"

namespace simlab::bhatskeide {

namespace {

long aligned_steps(double t, int arcs, const char* who) {
  if (t < 0.0) fail(ErrorCode::NegativeTime, std::string(who) + ": t must be >= 0");
  double steps = t * arcs;
  long rounded = std::lround(steps);
  if (std::abs(steps - static_cast<double>(rounded)) > 1e-9 * std::max(1.0, std::abs(steps)))
    fail(ErrorCode::NotGridAligned, std::string(who) + ": t*M is not an integer");
  return rounded;
}

std::vector<Matrix> powers_up_to(const Matrix& t, long top) {
  std::vector<Matrix> pw;
  pw.reserve(top + 1);
  pw.push_back(Matrix::Identity(t.rows(), t.cols()));
  for (long k = 1; k <= top; ++k) pw.push_back(pw.back() * t);
  return pw;
}

Matrix assemble(const Matrix& base, int arcs, long steps) {
  const Eigen::Index n = base.rows();
  const long floor_t = steps / arcs;
  const long frac_steps = steps % arcs;
  std::vector<Matrix> pw = powers_up_to(base, floor_t + (frac_steps > 0 ? 1 : 0));

  Matrix out = Matrix::Zero(arcs * n, arcs * n);
  for (long j = 0; j < arcs; ++j) {
    long src = ((j - steps) % arcs + arcs) % arcs;
    const Matrix& block = (j < frac_steps) ? pw[floor_t + 1] : pw[floor_t];
    out.block(j * n, src * n, n, n) = block;
  }
  return out;
}

}  // namespace

Matrix bs_matrix(const InterpolatedSemigroup& s, double t) {
  long steps = aligned_steps(t, s.grid.arcs, "bs_matrix");
  return assemble(s.base, s.grid.arcs, steps);
}

Matrix bs_matrix_snapped(const InterpolatedSemigroup& s, double t, double* perturbation) {
  if (t < 0.0) fail(ErrorCode::NegativeTime, "bs_matrix_snapped: t must be >= 0");
  long steps = std::lround(t * s.grid.arcs);
  if (perturbation)
    *perturbation = std::abs(t - static_cast<double>(steps) / s.grid.arcs);
  return assemble(s.base, s.grid.arcs, steps);
}

double bs_check_interpolation(const InterpolatedSemigroup& s, int n) {
  if (n < 0) fail(ErrorCode::NegativeTime, "bs_check_interpolation: n must be >= 0");
  Matrix lhs = bs_matrix(s, static_cast<double>(n));
  const Eigen::Index d = s.base.rows();
  Matrix tn = Matrix::Identity(d, d);
  for (int k = 0; k < n; ++k) tn = tn * s.base;
  Matrix rhs = numkit::kron(Matrix::Identity(s.grid.arcs, s.grid.arcs), tn);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

simcert::MetricCertificate bs_extract_certificate(const simcert::MetricCertificate& p_eq,
                                                  const InterpolatedSemigroup& s,
                                                  const TolerancePolicy& tol) {
  tol.validate();
  const int m = s.grid.arcs;
  const Eigen::Index n = s.base.rows();
  if (p_eq.p.rows() != static_cast<Eigen::Index>(m) * n)
    fail(ErrorCode::DimensionMismatch, "bs_extract_certificate: certificate dimension");

  // Premise: P certifies contraction at every grid time in [0, 1].
  double slack = tol.tol_psd * std::max(1.0, p_eq.kappa);
  for (int j = 0; j <= m; ++j) {
    Matrix tt = bs_matrix(s, static_cast<double>(j) / m);
    if (numkit::min_eig(hermitize(p_eq.p - tt.adjoint() * p_eq.p * tt), tol) < -slack)
      fail(ErrorCode::CertificateInvalid,
           "bs_extract_certificate: form does not certify grid time " + std::to_string(j));
  }

  // chi = unit constant grid vector: 1/sqrt(M) on every arc.
  Matrix chi = Matrix::Constant(m, 1, Complex(1.0 / std::sqrt(double(m)), 0.0));
  Matrix embed = numkit::kron(chi, Matrix::Identity(n, n));
  Matrix p_h = hermitize(embed.adjoint() * p_eq.p * embed);

  simcert::MetricCertificate cert;
  Eigen::SelfAdjointEigenSolver<Matrix> es(p_h, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) fail(ErrorCode::CertificateInvalid, "bs_extract_certificate: degenerate form");
  cert.p = p_h / lmin;
  cert.kappa = numkit::cond_pd(cert.p, tol);
  cert.rate = 0.0;
  cert.residual = numkit::min_eig(hermitize(cert.p - s.base.adjoint() * cert.p * s.base), tol);
  return cert;
}

Matrix bs_multifactor(const std::vector<Matrix>& bases, const std::vector<CircleGrid>& grids,
                      double t, int factor_index, const TolerancePolicy& tol) {
  tol.validate();
  const int m = static_cast<int>(bases.size());
  if (m == 0 || grids.size() != bases.size())
    fail(ErrorCode::BadParams, "bs_multifactor: bases and grids must match and be nonempty");
  if (factor_index < 1 || factor_index > m)
    fail(ErrorCode::BadParams, "bs_multifactor: factor index out of range");
  const Eigen::Index n = bases[0].rows();
  for (const Matrix& b : bases) {
    require_square(b, "bs_multifactor");
    if (b.rows() != n) fail(ErrorCode::DimensionMismatch, "bs_multifactor: base dims disagree");
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      double comm = (bases[a] * bases[b] - bases[b] * bases[a]).cwiseAbs().maxCoeff();
      double scale =
          std::max(1.0, bases[a].cwiseAbs().maxCoeff() * bases[b].cwiseAbs().maxCoeff());
      if (comm > tol.tol_rel * scale)
        fail(ErrorCode::NonCommuting, "bs_multifactor: bases do not commute");
    }

  const int k = factor_index - 1;
  long steps = aligned_steps(t, grids[k].arcs, "bs_multifactor");
  long floor_t = steps / grids[k].arcs;
  long frac_steps = steps % grids[k].arcs;
  std::vector<Matrix> pw = powers_up_to(bases[k], floor_t + (frac_steps > 0 ? 1 : 0));

  long cells = 1;
  for (const CircleGrid& g : grids) cells *= g.arcs;
  Matrix out = Matrix::Zero(cells * n, cells * n);

  // Row-major multi-index over the arc coordinates, coordinate k rotating.
  std::vector<long> strides(m, 1);
  for (int j = m - 2; j >= 0; --j) strides[j] = strides[j + 1] * grids[j + 1].arcs;
  for (long cell = 0; cell < cells; ++cell) {
    long jk = (cell / strides[k]) % grids[k].arcs;
    long src_jk = ((jk - steps) % grids[k].arcs + grids[k].arcs) % grids[k].arcs;
    long src_cell = cell + (src_jk - jk) * strides[k];
    const Matrix& block = (jk < frac_steps) ? pw[floor_t + 1] : pw[floor_t];
    out.block(cell * n, src_cell * n, n, n) = block;
  }
  return out;
}

void write_norm_series(std::ostream& out, const InterpolatedSemigroup& s,
                       const std::vector<double>& times) {
  out << "t,norm,floor_t,frac_t\n";
  for (double t : times) {
    Matrix tt = bs_matrix(s, t);
    double floor_t = std::floor(t + 1e-12);
    out << io::format_double(t) << ',' << io::format_double(numkit::op_norm(tt)) << ','
        << io::format_double(floor_t) << ',' << io::format_double(t - floor_t) << '\n';
  }
}

}  // namespace simlab::bhatskeide
