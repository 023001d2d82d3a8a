#include "simlab/tensorsplit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "simlab/matrix_io.hpp"
#include "simlab/numkit.hpp"

namespace simlab::tensorsplit {

using simcert::MetricCertificate;
using simcert::Verdict;

namespace {

constexpr double kRadiusFloor = 1e-12;  // below this a factor counts as quasi-nilpotent

/// Certify one scaled factor under the budget: Neumann series first when the
/// radius allows it, bisection otherwise.
std::optional<MetricCertificate> certify_factor(const Matrix& scaled, double kappa_max,
                                                const TolerancePolicy& tol) {
  double r = numkit::spectral_radius(scaled);
  if (r < 1.0 - tol.tol_rel) {
    MetricCertificate nc = simcert::neumann_certificate(scaled, tol);
    if (nc.kappa <= kappa_max) return nc;
  }
  simcert::ConstantResult res = simcert::similarity_constant(scaled, kappa_max, tol);
  if (res.verdict == Verdict::Similar) return res.certificate;
  return std::nullopt;
}

MetricCertificate assemble_continuous(const std::vector<MetricCertificate>& certs,
                                      const std::vector<Matrix>& shifted_generators,
                                      const TolerancePolicy& tol) {
  Matrix p = certs[0].p;
  double kappa = certs[0].kappa;
  for (std::size_t k = 1; k < certs.size(); ++k) {
    p = numkit::kron(p, certs[k].p);
    kappa *= certs[k].kappa;
  }
  // Generator of the tensor semigroup: sum of I (x) ... A_k ... (x) I.
  Eigen::Index dim = p.rows();
  Matrix gen = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < shifted_generators.size(); ++k) {
    Matrix term = Matrix::Identity(1, 1);
    for (std::size_t j = 0; j < shifted_generators.size(); ++j) {
      Eigen::Index nj = shifted_generators[j].rows();
      term = numkit::kron(term, j == k ? shifted_generators[j] : Matrix::Identity(nj, nj));
    }
    gen += term;
  }
  MetricCertificate cert;
  cert.p = p;
  cert.kappa = kappa;
  cert.rate = 0.0;
  cert.residual = numkit::min_eig(hermitize(-(gen.adjoint() * p + p * gen)), tol);
  return cert;
}

}  // namespace

double growth_bound(const simcert::SemigroupSpec& spec) {
  if (spec.has_generator()) return numkit::spectral_abscissa(spec.generator_matrix());
  const auto& sampled = std::get<simcert::SemigroupSpec::Sampled>(spec.kind);
  if (sampled.times.empty()) fail(ErrorCode::EmptySample, "growth_bound: no samples");
  double t = sampled.times.back();
  double r = numkit::spectral_radius(sampled.samples.back());
  if (r == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(r) / t;
}

SplitResult split_scaling_discrete(const std::vector<Matrix>& factors, double kappa_max,
                                   const TolerancePolicy& tol) {
  tol.validate();
  if (factors.empty()) fail(ErrorCode::BadParams, "split needs at least one factor");
  const std::size_t m = factors.size();
  std::vector<double> radii(m);
  for (std::size_t k = 0; k < m; ++k) {
    require_square(factors[k], "split_scaling_discrete");
    require_finite(factors[k], "split_scaling_discrete");
    if (numkit::op_norm(factors[k]) == 0.0)
      fail(ErrorCode::ZeroFactor, "split_scaling_discrete: zero factor");
    radii[k] = numkit::spectral_radius(factors[k]);
  }

  SplitResult out;
  out.mode = SplitMode::Discrete;
  out.scalings.assign(m, 1.0);
  out.factor_certificates.assign(m, std::nullopt);

  double prod_r = 1.0;
  for (double r : radii) prod_r *= r;
  if (prod_r > 1.0 + tol.tol_rel) {
    out.verdict = Verdict::SpectralObstruction;
    return out;
  }

  std::vector<std::size_t> nil;
  for (std::size_t k = 0; k < m; ++k)
    if (radii[k] <= kRadiusFloor) nil.push_back(k);

  auto attempt = [&](double beta) -> bool {
    std::vector<double> alphas(m, 1.0);
    if (nil.empty()) {
      // Geometric balancing: every rescaled radius equals (prod r)^{1/m},
      // which at m = 2 is the geometric midpoint of the admissible interval.
      double g = std::pow(prod_r, 1.0 / static_cast<double>(m));
      for (std::size_t k = 0; k < m; ++k) alphas[k] = g / radii[k];
    } else {
      // Quasi-nilpotent factors absorb the balancing weight; the others are
      // scaled to radius beta.
      double prod_pos = 1.0;
      for (std::size_t k = 0; k < m; ++k)
        if (radii[k] > kRadiusFloor) {
          alphas[k] = beta / radii[k];
          prod_pos *= radii[k] / beta;
        }
      double share = std::pow(prod_pos, 1.0 / static_cast<double>(nil.size()));
      for (std::size_t z : nil) alphas[z] = share;
    }

    std::vector<std::optional<MetricCertificate>> certs(m);
    for (std::size_t k = 0; k < m; ++k) {
      certs[k] = certify_factor(alphas[k] * factors[k], kappa_max, tol);
      if (!certs[k]) {
        out.scalings = alphas;
        out.factor_certificates = certs;
        return false;
      }
    }
    out.scalings = alphas;
    out.factor_certificates = certs;
    return true;
  };

  bool ok = attempt(1.0);
  if (!ok && !nil.empty()) ok = attempt(0.5);  // shrink the positive radii, let nilpotents absorb

  if (!ok) {
    out.verdict = Verdict::NotSimilarWithinBudget;
    return out;
  }
  out.verdict = Verdict::Similar;

  std::vector<MetricCertificate> certs;
  std::vector<Matrix> scaled;
  for (std::size_t k = 0; k < m; ++k) {
    certs.push_back(*out.factor_certificates[k]);
    scaled.push_back(out.scalings[k] * factors[k]);
  }
  out.tensor_certificate = assemble_certificate(certs, scaled, tol);
  return out;
}

SplitResult split_scaling_semigroup(const std::vector<simcert::SemigroupSpec>& factors,
                                    double kappa_max, const TolerancePolicy& tol) {
  tol.validate();
  if (factors.empty()) fail(ErrorCode::BadParams, "split needs at least one factor");
  const std::size_t m = factors.size();
  std::vector<double> omega(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!factors[k].has_generator())
      fail(ErrorCode::BadParams, "split_scaling_semigroup needs generator-given factors");
    omega[k] = numkit::spectral_abscissa(factors[k].generator_matrix());
  }

  SplitResult out;
  out.mode = SplitMode::Semigroup;
  out.scalings.assign(m, 0.0);
  out.factor_certificates.assign(m, std::nullopt);

  double total = 0.0;
  for (double w : omega) total += w;
  if (total > tol.tol_rel) {
    out.verdict = Verdict::SpectralObstruction;
    return out;
  }

  // Balance every shifted growth bound to total/m <= 0, with sum d_k = 0.
  std::vector<double> shifts(m);
  for (std::size_t k = 0; k < m; ++k) shifts[k] = -omega[k] + total / static_cast<double>(m);
  out.scalings = shifts;

  std::vector<Matrix> shifted(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Matrix& a = factors[k].generator_matrix();
    shifted[k] = a + shifts[k] * Matrix::Identity(a.rows(), a.cols());
  }

  std::vector<MetricCertificate> certs;
  bool strict_interior = total < -tol.tol_rel;
  for (std::size_t k = 0; k < m; ++k) {
    std::optional<MetricCertificate> cert;
    if (strict_interior) {
      double rate = total / (2.0 * static_cast<double>(m));
      MetricCertificate rc = simcert::rota_renorm(shifted[k], rate, tol);
      if (rc.kappa <= kappa_max) {
        // Re-validate at rate 0: the strict rate makes the plain defect block
        // positive as well.
        MetricCertificate c0;
        c0.p = rc.p;
        c0.kappa = rc.kappa;
        c0.rate = 0.0;
        c0.residual = numkit::min_eig(
            hermitize(-(shifted[k].adjoint() * rc.p + rc.p * shifted[k])), tol);
        cert = c0;
      }
    }
    if (!cert) {
      simcert::ConstantResult res = simcert::semigroup_constant(shifted[k], kappa_max, tol);
      if (res.verdict == Verdict::Similar) cert = res.certificate;
    }
    if (!cert) {
      out.factor_certificates[k] = std::nullopt;
      out.verdict = Verdict::NotSimilarWithinBudget;
      return out;
    }
    out.factor_certificates[k] = cert;
    certs.push_back(*cert);
  }

  out.verdict = Verdict::Similar;
  out.tensor_certificate = assemble_continuous(certs, shifted, tol);
  return out;
}

simcert::MetricCertificate assemble_certificate(const std::vector<MetricCertificate>& certs,
                                                const std::vector<Matrix>& factors,
                                                const TolerancePolicy& tol) {
  tol.validate();
  if (certs.empty() || certs.size() != factors.size())
    fail(ErrorCode::DimensionMismatch, "assemble_certificate: factor/certificate count mismatch");
  for (std::size_t k = 0; k < certs.size(); ++k)
    if (certs[k].p.rows() != factors[k].rows())
      fail(ErrorCode::DimensionMismatch, "assemble_certificate: certificate dimension mismatch");

  Matrix p = certs[0].p;
  Matrix t = factors[0];
  double kappa = certs[0].kappa;
  for (std::size_t k = 1; k < certs.size(); ++k) {
    p = numkit::kron(p, certs[k].p);
    t = numkit::kron(t, factors[k]);
    kappa *= certs[k].kappa;
  }
  MetricCertificate cert;
  cert.p = p;
  cert.kappa = kappa;  // exact: Kronecker eigenvalues multiply pairwise
  cert.rate = 0.0;
  cert.residual = numkit::min_eig(hermitize(p - t.adjoint() * p * t), tol);
  return cert;
}

simcert::MetricCertificate extract_factor_certificate(const MetricCertificate& tensor_cert,
                                                      const Matrix& t1, const Matrix& t2, int index,
                                                      const TolerancePolicy& tol) {
  tol.validate();
  if (index != 1 && index != 2)
    fail(ErrorCode::BadParams, "extract_factor_certificate: index must be 1 or 2");
  require_square(t1, "extract_factor_certificate");
  require_square(t2, "extract_factor_certificate");
  const Eigen::Index n1 = t1.rows(), n2 = t2.rows();
  if (tensor_cert.p.rows() != n1 * n2)
    fail(ErrorCode::DimensionMismatch, "extract_factor_certificate: certificate dimension");

  Matrix tensor_op = numkit::kron(t1, t2);
  double slack = tol.tol_psd * std::max(1.0, tensor_cert.kappa);
  if (numkit::min_eig(hermitize(tensor_cert.p - tensor_op.adjoint() * tensor_cert.p * tensor_op),
                      tol) < -slack)
    fail(ErrorCode::CertificateInvalid,
         "extract_factor_certificate: form does not certify the tensor product");

  const Matrix& t_f = (index == 1) ? t1 : t2;
  const Matrix& t_o = (index == 1) ? t2 : t1;
  double r_o = numkit::spectral_radius(t_o);
  if (r_o < 1.0 - tol.tol_rel)
    fail(ErrorCode::NoPeripheralVector,
         "extract_factor_certificate: the other factor has no peripheral eigenvalue");

  Vector h = simcert::peripheral_vector(t_o, 8, tol);
  Eigen::Index which = 0;
  Vector evs = numkit::eigenvalues(t_o);
  evs.cwiseAbs().maxCoeff(&which);
  double eig_residual = (t_o * h - evs(which) * h).norm();

  auto embed = [&](const Vector& v) {
    Matrix vm = Matrix::Zero(v.size(), 1);
    vm.col(0) = v;
    return index == 1 ? numkit::kron(Matrix::Identity(n1, n1), vm)
                      : numkit::kron(vm, Matrix::Identity(n2, n2));
  };

  auto compression = [&](const Vector& v) -> Matrix {
    Matrix e = embed(v);
    return hermitize(e.adjoint() * tensor_cert.p * e);
  };

  Matrix p_f;
  if (eig_residual <= 1e3 * tol.tol_rel * std::max(1.0, numkit::op_norm(t_o))) {
    // Exact peripheral eigenvector: the averaged compressions are all equal,
    // so the single compression already certifies the factor.
    p_f = compression(h);
  } else {
    // Numerically defective peripheral eigenvalue: average the compressions
    // along the orbit and keep the best iterate.
    const int n_cesaro = 64;
    Matrix sum = compression(h);
    Matrix best = sum;
    double best_res = -std::numeric_limits<double>::infinity();
    Vector orbit = h;
    for (int k = 1; k <= n_cesaro; ++k) {
      orbit = t_o * orbit;
      sum += compression(orbit);
      Matrix avg = sum / static_cast<double>(k + 1);
      Eigen::SelfAdjointEigenSolver<Matrix> aes(hermitize(avg), Eigen::EigenvaluesOnly);
      double almin = aes.eigenvalues().minCoeff();
      if (!(almin > 0.0)) continue;
      Matrix candidate = hermitize(avg) / almin;
      double res = numkit::min_eig(hermitize(candidate - t_f.adjoint() * candidate * t_f), tol) /
                   std::max(1.0, aes.eigenvalues().maxCoeff() / almin);
      if (res > best_res) {
        best_res = res;
        best = avg;
      }
    }
    p_f = best;
  }

  MetricCertificate cert;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(p_f), Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0.0))
    fail(ErrorCode::CertificateInvalid, "extract_factor_certificate: compression degenerated");
  cert.p = hermitize(p_f) / lmin;
  cert.kappa = numkit::cond_pd(cert.p, tol);
  cert.rate = 0.0;
  cert.residual = numkit::min_eig(hermitize(cert.p - t_f.adjoint() * cert.p * t_f), tol);
  return cert;
}

bool tensorially_preserves(const simcert::SemigroupSpec& spec, double kappa_max,
                           const TolerancePolicy& tol) {
  if (!spec.has_generator())
    fail(ErrorCode::BadParams, "tensorially_preserves needs a generator-given semigroup");
  double bound = growth_bound(spec);
  if (std::abs(bound) > tol.tol_rel) return false;
  simcert::ConstantResult res = simcert::semigroup_constant(spec.generator_matrix(), kappa_max, tol);
  return res.verdict == Verdict::Similar;
}

void write_split_report(std::ostream& out, const SplitResult& result) {
  for (std::size_t k = 0; k < result.scalings.size(); ++k) {
    out << (k + 1) << ' ' << io::format_double(result.scalings[k]);
    if (result.factor_certificates[k]) {
      out << ' ' << io::format_double(result.factor_certificates[k]->kappa) << ' '
          << io::format_double(result.factor_certificates[k]->residual);
    } else {
      out << " inf -";
    }
    out << '\n';
  }
  out << "tensor " << simcert::verdict_name(result.verdict);
  if (result.tensor_certificate)
    out << " kappa=" << io::format_double(result.tensor_certificate->kappa)
        << " residual=" << io::format_double(result.tensor_certificate->residual);
  out << '\n';
}

}  // namespace simlab::tensorsplit
