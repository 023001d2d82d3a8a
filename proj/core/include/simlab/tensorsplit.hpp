#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "simlab/simcert.hpp"

namespace simlab::tensorsplit {

enum class SplitMode { Discrete, Semigroup };

/// Verdict plus per-factor scalings (multiplicative alpha_k with product 1,
/// or additive d_k with sum 0) and per-factor certificates.
struct SplitResult {
  simcert::Verdict verdict = simcert::Verdict::NotSimilarWithinBudget;
  SplitMode mode = SplitMode::Discrete;
  std::vector<double> scalings;
  std::vector<std::optional<simcert::MetricCertificate>> factor_certificates;
  std::optional<simcert::MetricCertificate> tensor_certificate;
};

/// Exponential growth bound: spectral abscissa of the generator, or
/// log r(T(t))/t at the largest grid time for sampled families.
double growth_bound(const simcert::SemigroupSpec& spec);

/// Splitting of a tensor product of operators: obstruct when the radii
/// multiply above 1, rescale into the certifiable range otherwise, certify
/// factor by factor and assemble the tensor certificate.
SplitResult split_scaling_discrete(const std::vector<Matrix>& factors, double kappa_max = 1e8,
                                   const TolerancePolicy& tol = {});

/// Additive counterpart for generator-given semigroups: shifts d_k with sum 0
/// balance the growth bounds, then each shifted factor is certified.
SplitResult split_scaling_semigroup(const std::vector<simcert::SemigroupSpec>& factors,
                                    double kappa_max = 1e8, const TolerancePolicy& tol = {});

/// P = P_1 (x) ... (x) P_m with kappa = prod kappa_k; the residual against
/// the tensor operator is re-verified.
simcert::MetricCertificate assemble_certificate(
    const std::vector<simcert::MetricCertificate>& certs, const std::vector<Matrix>& factors,
    const TolerancePolicy& tol = {});

/// Compression of a tensor certificate onto one factor along a peripheral
/// unit eigenvector of the other factor; falls back to averaged compressions
/// when the peripheral eigenvalue is numerically defective.
simcert::MetricCertificate extract_factor_certificate(const simcert::MetricCertificate& tensor_cert,
                                                      const Matrix& t1, const Matrix& t2, int index,
                                                      const TolerancePolicy& tol = {});

/// True iff the semigroup is certified similar-to-contraction within budget
/// and its growth bound vanishes.
bool tensorially_preserves(const simcert::SemigroupSpec& spec, double kappa_max = 1e8,
                           const TolerancePolicy& tol = {});

/// Structured text report: one line per factor "k scaling kappa residual",
/// then a tensor summary line.
void write_split_report(std::ostream& out, const SplitResult& result);

}  // namespace simlab::tensorsplit
