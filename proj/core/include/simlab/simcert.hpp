#pragma once

#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "simlab/types.hpp"

namespace simlab::simcert {

/// Hermitian positive definite form P witnessing ||T||_P <= 1 (rate 0) or a
/// quasi-contraction rate a. Normalized so lambda_min(P) = 1, hence
/// kappa = lambda_max(P) and the similarity constant it certifies is
/// sqrt(kappa).
struct MetricCertificate {
  Matrix p;
  double kappa = 1.0;
  double rate = 0.0;
  double residual = 0.0;  // min eigenvalue of the defect block
};

/// A matrix semigroup, either t |-> e^{tA} or a sampled map on a time grid.
struct SemigroupSpec {
  struct Generator {
    Matrix a;
  };
  struct Sampled {
    std::vector<double> times;  // strictly increasing, > 0
    std::vector<Matrix> samples;
  };
  std::variant<Generator, Sampled> kind;
  Eigen::Index dim = 0;

  static SemigroupSpec generator(Matrix a);
  static SemigroupSpec sampled(std::vector<double> times, std::vector<Matrix> samples,
                               const TolerancePolicy& tol = {});
  bool has_generator() const { return std::holds_alternative<Generator>(kind); }
  const Matrix& generator_matrix() const { return std::get<Generator>(kind).a; }
};

enum class Verdict { Similar, NotSimilarWithinBudget, SpectralObstruction };

const char* verdict_name(Verdict v);

struct ConstantResult {
  Verdict verdict = Verdict::NotSimilarWithinBudget;
  double constant = std::numeric_limits<double>::infinity();
  std::optional<MetricCertificate> certificate;
  double lower_bound = 1.0;
  double upper_bound = std::numeric_limits<double>::infinity();
};

/// Truncated series certificate P = sum_n (T*)^n T^n, valid when r(T) < 1.
MetricCertificate neumann_certificate(const Matrix& t, const TolerancePolicy& tol = {});

/// Feasibility of I <= P <= kappa I, T* P T <= P. Returns the witness, or
/// nothing when infeasibility is certified. Throws BudgetExceeded when the
/// search ends without resolution.
std::optional<Matrix> contraction_feasible(const Matrix& t, double kappa,
                                           const TolerancePolicy& tol = {});

/// C(T) by bisection over the feasibility kappa.
ConstantResult similarity_constant(const Matrix& t, double kappa_max = 1e8,
                                   const TolerancePolicy& tol = {});

/// C of the semigroup generated by A: min sqrt(kappa) over certificates with
/// A*P + PA <= 0.
ConstantResult semigroup_constant(const Matrix& a, double kappa_max = 1e8,
                                  const TolerancePolicy& tol = {});

/// Lyapunov-built quasi-contraction certificate at rate a > abscissa(A).
MetricCertificate rota_renorm(const Matrix& a, double rate, const TolerancePolicy& tol = {});

/// Smallest feasible quasi-contraction rate under a condition-number budget.
double quasi_rate(const Matrix& a, double kappa_budget, const TolerancePolicy& tol = {});

/// max_{1<=n<=N} ||T^n||; a lower bound for C(T).
double power_lower_bound(const Matrix& t, int n_max);

/// max over supplied polynomials of ||p(T)|| / max_{sampled |z|=1} |p(z)|.
double poly_lower_bound(const Matrix& t, const std::vector<std::vector<Complex>>& polynomials,
                        int boundary_samples);

/// Unit eigenvector of a peripheral eigenvalue; ||T^n x|| >= 1/2 for n <= n0.
Vector peripheral_vector(const Matrix& t, int n0, const TolerancePolicy& tol = {});

struct CrsimRow {
  double time = 0.0;
  ConstantResult result;
};

struct CrsimProfile {
  std::vector<CrsimRow> rows;
  ConstantResult semigroup;
  double sup_constant = 0.0;  // over the grid, when finite
  bool consistent = false;
};

/// C(e^{tA}) along a time grid, checked against the semigroup-level constant
/// and the dyadic monotonicity C(e^{2tA}) <= C(e^{tA}).
CrsimProfile crsim_profile(const Matrix& a, const std::vector<double>& t_grid,
                           double kappa_max = 1e8, const TolerancePolicy& tol = {});

/// Validation used by tests and by the splitting layer: recompute the
/// certificate invariants with independent eigenvalue calls.
bool certificate_valid_discrete(const Matrix& t, const MetricCertificate& cert,
                                const TolerancePolicy& tol = {});
bool certificate_valid_continuous(const Matrix& a, const MetricCertificate& cert,
                                  const TolerancePolicy& tol = {});

void write_certificate(std::ostream& out, const MetricCertificate& cert);
MetricCertificate read_certificate(std::istream& in, const std::string& origin = "<stream>");

// Internal hooks shared with the splitting layer.
namespace detail {
/// Adaptive probe of sup_n ||T^n|| (dense small powers plus squaring),
/// stopping at the cap or on a plateau.
double power_growth_probe(const Matrix& t, double cap);
/// Adaptive probe of sup_t ||e^{tA}|| on a doubling time grid.
double orbit_growth_probe(const Matrix& a, double cap);
/// similarity_constant with an optional externally supplied feasible
/// certificate used to seed the upper bracket.
ConstantResult similarity_constant_seeded(const Matrix& t, double kappa_max,
                                          const TolerancePolicy& tol,
                                          const MetricCertificate* seed);
}  // namespace detail

}  // namespace simlab::simcert
