#include "simlab/simcert.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "simlab/lmi.hpp"
#include "simlab/matrix_io.hpp"
#include "simlab/numkit.hpp"

namespace simlab::simcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double feas_target(double kappa, const TolerancePolicy& tol) {
  return -tol.tol_psd * std::max(1.0, kappa);
}

Matrix normalize_min_eig(const Matrix& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(p), Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) fail(ErrorCode::NotPositive, "certificate form is not positive definite");
  return hermitize(p) / lmin;
}

MetricCertificate make_certificate_discrete(const Matrix& t, const Matrix& p_raw, double rate,
                                            const TolerancePolicy& tol) {
  MetricCertificate cert;
  cert.p = normalize_min_eig(p_raw);
  cert.kappa = numkit::cond_pd(cert.p, tol);
  cert.rate = rate;
  cert.residual = numkit::min_eig(hermitize(cert.p - t.adjoint() * cert.p * t), tol);
  return cert;
}

MetricCertificate make_certificate_continuous(const Matrix& a, const Matrix& p_raw, double rate,
                                              const TolerancePolicy& tol) {
  MetricCertificate cert;
  cert.p = normalize_min_eig(p_raw);
  cert.kappa = numkit::cond_pd(cert.p, tol);
  cert.rate = rate;
  Matrix shifted = a - rate * Matrix::Identity(a.rows(), a.cols());
  cert.residual = numkit::min_eig(hermitize(-(shifted.adjoint() * cert.p + cert.p * shifted)), tol);
  return cert;
}

struct Bracket {
  double kappa = 0.0;
  Matrix p;
};

/// Geometric bisection of the smallest kappa accepted by the feasibility
/// engine, warm-starting every query from the best known certificate.
Bracket bisect_kappa(lmi::BlockKind kind, const Matrix& op, double lo, Bracket hi,
                     const TolerancePolicy& tol) {
  for (int it = 0; it < 200 && hi.kappa - lo > tol.tol_rel * hi.kappa; ++it) {
    double mid = std::sqrt(std::max(lo, 1.0) * hi.kappa);
    if (!(mid > lo && mid < hi.kappa)) break;
    auto res = lmi::find_feasible(kind, op, mid, tol, feas_target(mid, tol), &hi.p);
    if (res.status == lmi::Status::Feasible) {
      hi = Bracket{mid, res.p};
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Similar: return "Similar";
    case Verdict::NotSimilarWithinBudget: return "NotSimilarWithinBudget";
    case Verdict::SpectralObstruction: return "SpectralObstruction";
  }
  return "Unknown";
}

SemigroupSpec SemigroupSpec::generator(Matrix a) {
  require_square(a, "SemigroupSpec::generator");
  require_finite(a, "SemigroupSpec::generator");
  SemigroupSpec spec;
  spec.dim = a.rows();
  spec.kind = Generator{std::move(a)};
  return spec;
}

SemigroupSpec SemigroupSpec::sampled(std::vector<double> times, std::vector<Matrix> samples,
                                     const TolerancePolicy& tol) {
  if (times.empty() || times.size() != samples.size())
    fail(ErrorCode::EmptySample, "sampled semigroup needs matching nonempty times and samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0.0 || (i > 0 && times[i] <= times[i - 1]))
      fail(ErrorCode::BadParams, "sample times must be positive and increasing");
    require_square(samples[i], "SemigroupSpec::sampled");
    require_finite(samples[i], "SemigroupSpec::sampled");
    if (samples[i].rows() != samples[0].rows())
      fail(ErrorCode::DimensionMismatch, "sample dimensions disagree");
  }
  // Semigroup law on grid-compatible pairs.
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = i; j < times.size(); ++j) {
      double sum = times[i] + times[j];
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - sum) > 1e-12 * std::max(1.0, sum)) continue;
        double err = (samples[i] * samples[j] - samples[k]).cwiseAbs().maxCoeff();
        double scale = std::max(1.0, samples[k].cwiseAbs().maxCoeff());
        if (err > 1e3 * tol.tol_rel * scale)
          fail(ErrorCode::BadParams, "sampled family violates the semigroup law on the grid");
      }
    }
  SemigroupSpec spec;
  spec.dim = samples[0].rows();
  spec.kind = Sampled{std::move(times), std::move(samples)};
  return spec;
}

MetricCertificate neumann_certificate(const Matrix& t, const TolerancePolicy& tol) {
  tol.validate();
  require_square(t, "neumann_certificate");
  require_finite(t, "neumann_certificate");
  double r = numkit::spectral_radius(t);
  if (r >= 1.0 - tol.tol_rel)
    fail(ErrorCode::RadiusNotLessThanOne, "neumann_certificate requires r(T) < 1");

  const Eigen::Index n = t.rows();
  Matrix p = Matrix::Identity(n, n);
  Matrix w = t;  // T^k
  double prev_f = kInf;
  for (int k = 1; k <= 20000; ++k) {
    double f = w.norm();  // Frobenius bounds the operator norm from above
    if (f == 0.0) break;  // nilpotent: the series is exact
    p += w.adjoint() * w;
    double q = std::min(1.0 - 1e-12, std::max(f / std::max(prev_f, 1e-300), r));
    if (k >= 4 && q < 1.0) {
      double tail = f * f * q * q / (1.0 - q * q);
      if (tail <= tol.tol_psd) {
        w = w * t;
        break;
      }
    }
    prev_f = f;
    w = w * t;
    if (k == 20000)
      fail(ErrorCode::BudgetExceeded, "neumann_certificate: series did not converge");
  }
  return make_certificate_discrete(t, p, 0.0, tol);
}

namespace detail {

double power_growth_probe(const Matrix& t, double cap) {
  double best = std::max(1.0, numkit::op_norm(t));
  if (best > cap) return best;
  Matrix w = t;
  // Dense low powers first: transient peaks often sit at small n.
  for (int k = 2; k <= 32 && k <= 4 * t.rows() + 8; ++k) {
    w = w * t;
    best = std::max(best, numkit::op_norm(w));
    if (best > cap) return best;
  }
  // Then repeated squaring: exponent doubles, so polynomial growth in n shows
  // up geometrically in k.
  Matrix q = t;
  int plateau = 0;
  for (int k = 1; k <= 60; ++k) {
    q = q * q;
    double nq = numkit::op_norm(q);
    if (nq > best * (1.0 + 1e-9)) {
      best = nq;
      plateau = 0;
    } else {
      ++plateau;
    }
    if (best > cap) return best;
    if (nq < 1.0 - 1e-12) break;  // contraction from here on, no more growth
    if (plateau >= 8) break;
  }
  return best;
}

double orbit_growth_probe(const Matrix& a, double cap) {
  double best = 1.0;
  Matrix e = numkit::matexp(a, 1.0 / 16.0);
  double t = 1.0 / 16.0;
  int plateau = 0;
  for (int k = 0; k <= 48; ++k) {
    double ne = numkit::op_norm(e);
    if (ne > best * (1.0 + 1e-9)) {
      best = ne;
      plateau = 0;
    } else {
      ++plateau;
    }
    if (best > cap) return best;
    if (ne < 1.0 - 1e-12 && t >= 1.0) break;
    if (plateau >= 8 && t >= 4.0) break;
    e = e * e;  // e^{tA} -> e^{2tA}
    t *= 2.0;
  }
  return best;
}

ConstantResult similarity_constant_seeded(const Matrix& t, double kappa_max,
                                          const TolerancePolicy& tol,
                                          const MetricCertificate* seed) {
  tol.validate();
  require_square(t, "similarity_constant");
  require_finite(t, "similarity_constant");
  if (!(kappa_max >= 1.0)) fail(ErrorCode::BadParams, "kappa_max must be >= 1");

  ConstantResult out;
  if (numkit::op_norm(t) <= 1.0 + tol.tol_psd) {
    out.verdict = Verdict::Similar;
    out.constant = 1.0;
    out.lower_bound = 1.0;
    out.upper_bound = 1.0;
    out.certificate = make_certificate_discrete(t, Matrix::Identity(t.rows(), t.cols()), 0.0, tol);
    return out;
  }

  double r = numkit::spectral_radius(t);
  if (r > 1.0 + tol.tol_rel) {
    out.verdict = Verdict::SpectralObstruction;
    out.lower_bound = kInf;
    return out;
  }

  double cap = 2.0 * std::sqrt(kappa_max) + 1.0;
  double plb = power_growth_probe(t, cap);
  out.lower_bound = std::max(1.0, plb);
  double kappa_lo = std::max(1.0, plb * plb);
  if (kappa_lo > kappa_max * (1.0 + tol.tol_rel)) {
    out.verdict = Verdict::NotSimilarWithinBudget;
    return out;
  }

  std::optional<Bracket> anchor;
  if (seed && seed->kappa <= kappa_max &&
      lmi::block_min_slack(lmi::BlockKind::Discrete, t, seed->kappa * (1.0 + tol.tol_psd),
                           seed->p) >= feas_target(seed->kappa, tol))
    anchor = Bracket{seed->kappa * (1.0 + tol.tol_psd), seed->p};
  if (!anchor && r < 1.0 - tol.tol_rel) {
    MetricCertificate nc = neumann_certificate(t, tol);
    if (nc.kappa <= kappa_max) anchor = Bracket{nc.kappa, nc.p};
  }
  if (!anchor) {
    auto res = lmi::find_feasible(lmi::BlockKind::Discrete, t, kappa_max, tol,
                                  feas_target(kappa_max, tol));
    if (res.status == lmi::Status::Feasible)
      anchor = Bracket{kappa_max, res.p};
    else {
      out.verdict = Verdict::NotSimilarWithinBudget;
      return out;
    }
  }

  Bracket best = bisect_kappa(lmi::BlockKind::Discrete, t, kappa_lo, *anchor, tol);
  MetricCertificate cert = make_certificate_discrete(t, best.p, 0.0, tol);
  out.verdict = Verdict::Similar;
  out.upper_bound = std::sqrt(best.kappa);
  out.constant = std::min(std::sqrt(cert.kappa), out.upper_bound);
  out.lower_bound = std::min(out.lower_bound, out.constant);
  out.certificate = std::move(cert);
  return out;
}

}  // namespace detail

std::optional<Matrix> contraction_feasible(const Matrix& t, double kappa,
                                           const TolerancePolicy& tol) {
  tol.validate();
  require_square(t, "contraction_feasible");
  require_finite(t, "contraction_feasible");
  if (!(kappa >= 1.0)) fail(ErrorCode::BadParams, "kappa must be >= 1");

  if (numkit::op_norm(t) <= 1.0 + tol.tol_psd) return Matrix::Identity(t.rows(), t.cols());

  // Rigorous obstruction: any certificate P with cond(P) <= kappa forces
  // ||T^n|| <= sqrt(kappa) for every n.
  double plb = detail::power_growth_probe(t, 2.0 * std::sqrt(kappa) + 1.0);
  if (plb > std::sqrt(kappa) * (1.0 + tol.tol_rel)) return std::nullopt;

  auto res = lmi::find_feasible(lmi::BlockKind::Discrete, t, kappa, tol, feas_target(kappa, tol));
  if (res.status == lmi::Status::Feasible) return normalize_min_eig(res.p);
  if (res.status == lmi::Status::Stalled) {
    // Stall without a dual-style obstruction is reported distinctly.
    if (plb > std::sqrt(kappa)) return std::nullopt;
    fail(ErrorCode::BudgetExceeded, "contraction_feasible: search stalled without resolution");
  }
  fail(ErrorCode::BudgetExceeded, "contraction_feasible: iteration budget exhausted");
}

ConstantResult similarity_constant(const Matrix& t, double kappa_max, const TolerancePolicy& tol) {
  return detail::similarity_constant_seeded(t, kappa_max, tol, nullptr);
}

ConstantResult semigroup_constant(const Matrix& a, double kappa_max, const TolerancePolicy& tol) {
  tol.validate();
  require_square(a, "semigroup_constant");
  require_finite(a, "semigroup_constant");
  if (!(kappa_max >= 1.0)) fail(ErrorCode::BadParams, "kappa_max must be >= 1");

  ConstantResult out;
  if (numkit::numerical_abscissa(a) <= tol.tol_psd) {
    out.verdict = Verdict::Similar;
    out.constant = 1.0;
    out.lower_bound = 1.0;
    out.upper_bound = 1.0;
    out.certificate =
        make_certificate_continuous(a, Matrix::Identity(a.rows(), a.cols()), 0.0, tol);
    return out;
  }

  double abscissa = numkit::spectral_abscissa(a);
  if (abscissa > tol.tol_rel) {
    out.verdict = Verdict::SpectralObstruction;
    out.lower_bound = kInf;
    return out;
  }

  double cap = 2.0 * std::sqrt(kappa_max) + 1.0;
  double olb = detail::orbit_growth_probe(a, cap);
  out.lower_bound = std::max(1.0, olb);
  double kappa_lo = std::max(1.0, olb * olb);
  if (kappa_lo > kappa_max * (1.0 + tol.tol_rel)) {
    out.verdict = Verdict::NotSimilarWithinBudget;
    return out;
  }

  std::optional<Bracket> anchor;
  if (abscissa < -tol.tol_rel) {
    MetricCertificate rc = rota_renorm(a, 0.5 * abscissa, tol);
    if (rc.kappa <= kappa_max) anchor = Bracket{rc.kappa, rc.p};
  }
  if (!anchor) {
    auto res = lmi::find_feasible(lmi::BlockKind::Continuous, a, kappa_max, tol,
                                  feas_target(kappa_max, tol));
    if (res.status == lmi::Status::Feasible)
      anchor = Bracket{kappa_max, res.p};
    else {
      out.verdict = Verdict::NotSimilarWithinBudget;
      return out;
    }
  }

  Bracket best = bisect_kappa(lmi::BlockKind::Continuous, a, kappa_lo, *anchor, tol);
  MetricCertificate cert = make_certificate_continuous(a, best.p, 0.0, tol);
  out.verdict = Verdict::Similar;
  out.upper_bound = std::sqrt(best.kappa);
  out.constant = std::min(std::sqrt(cert.kappa), out.upper_bound);
  out.lower_bound = std::min(out.lower_bound, out.constant);
  out.certificate = std::move(cert);
  return out;
}

MetricCertificate rota_renorm(const Matrix& a, double rate, const TolerancePolicy& tol) {
  tol.validate();
  require_square(a, "rota_renorm");
  require_finite(a, "rota_renorm");
  const Eigen::Index n = a.rows();
  double abscissa = numkit::spectral_abscissa(a);
  if (!(rate > abscissa))
    fail(ErrorCode::RateBelowAbscissa, "rota_renorm requires rate > spectral abscissa");

  double numabs = numkit::numerical_abscissa(a);
  if (rate >= 0.0 && numabs <= rate + tol.tol_psd) {
    // e^{-rate t} e^{tA} is already a contraction semigroup; the identity
    // form certifies the rate.
    return make_certificate_continuous(a, Matrix::Identity(n, n), rate, tol);
  }

  Matrix shifted = a - rate * Matrix::Identity(n, n);
  if (numabs <= tol.tol_psd) {
    // Dissipative generator: the explicit construction
    // Q = I + (-2 rate) * integral_0^inf e^{t(A-rate)^*} e^{t(A-rate)} dt.
    Matrix x = numkit::lyap_solve(shifted, Matrix::Identity(n, n), tol);
    Matrix q = Matrix::Identity(n, n) - 2.0 * rate * x;
    return make_certificate_continuous(a, q, rate, tol);
  }

  // General stable data: pass first to an equivalent norm in which the
  // semigroup is contractive, then apply the same construction there. The
  // composition collapses to a single Lyapunov solve against W.
  if (abscissa < 0.0 && rate < 0.0) {
    Matrix w = normalize_min_eig(numkit::lyap_solve(a, Matrix::Identity(n, n), tol));
    Matrix x = numkit::lyap_solve(shifted, w, tol);
    Matrix q = w - 2.0 * rate * x;
    return make_certificate_continuous(a, q, rate, tol);
  }

  // Remaining case (rate above a non-dissipative abscissa): the resolvent
  // integral against the shifted generator certifies the rate directly.
  Matrix q = numkit::lyap_solve(shifted, Matrix::Identity(n, n), tol);
  return make_certificate_continuous(a, q, rate, tol);
}

double quasi_rate(const Matrix& a, double kappa_budget, const TolerancePolicy& tol) {
  tol.validate();
  require_square(a, "quasi_rate");
  require_finite(a, "quasi_rate");
  if (!(kappa_budget >= 1.0)) fail(ErrorCode::BadParams, "kappa_budget must be >= 1");

  double lo = numkit::spectral_abscissa(a);
  double hi = numkit::numerical_abscissa(a);
  if (hi - lo <= tol.tol_rel) return hi;

  Matrix warm = Matrix::Identity(a.rows(), a.cols());
  const Eigen::Index n = a.rows();
  for (int it = 0; it < 200 && hi - lo > tol.tol_rel; ++it) {
    double mid = 0.5 * (lo + hi);
    Matrix shifted = a - mid * Matrix::Identity(n, n);
    auto res = lmi::find_feasible(lmi::BlockKind::Continuous, shifted, kappa_budget, tol,
                                  feas_target(kappa_budget, tol), &warm);
    if (res.status == lmi::Status::Feasible) {
      hi = mid;
      warm = res.p;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double power_lower_bound(const Matrix& t, int n_max) {
  require_square(t, "power_lower_bound");
  require_finite(t, "power_lower_bound");
  if (n_max < 1) fail(ErrorCode::BadParams, "power_lower_bound needs N >= 1");
  double best = 0.0;
  Matrix w = Matrix::Identity(t.rows(), t.cols());
  for (int n = 1; n <= n_max; ++n) {
    w = w * t;
    best = std::max(best, numkit::op_norm(w));
  }
  return best;
}

double poly_lower_bound(const Matrix& t, const std::vector<std::vector<Complex>>& polynomials,
                        int boundary_samples) {
  require_square(t, "poly_lower_bound");
  require_finite(t, "poly_lower_bound");
  if (boundary_samples < 16) fail(ErrorCode::BadParams, "boundary_samples must be >= 16");
  if (polynomials.empty()) fail(ErrorCode::BadParams, "no polynomials supplied");

  const Eigen::Index n = t.rows();
  const double two_pi = 6.283185307179586476925286766559;
  double best = 0.0;
  for (const auto& coeffs : polynomials) {
    bool zero = true;
    for (const Complex& c : coeffs)
      if (c != Complex(0.0, 0.0)) zero = false;
    if (zero || coeffs.empty()) fail(ErrorCode::ZeroPolynomial, "a supplied polynomial is zero");

    Matrix pt = Matrix::Zero(n, n);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      pt = pt * t + *it * Matrix::Identity(n, n);

    double boundary = 0.0;
    for (int j = 0; j < boundary_samples; ++j) {
      double phi = two_pi * j / boundary_samples;
      Complex z(std::cos(phi), std::sin(phi));
      Complex val(0.0, 0.0);
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) val = val * z + *it;
      boundary = std::max(boundary, std::abs(val));
    }
    if (boundary <= 0.0)
      fail(ErrorCode::ZeroPolynomial, "polynomial vanishes at every boundary sample");
    best = std::max(best, numkit::op_norm(pt) / boundary);
  }
  return best;
}

Vector peripheral_vector(const Matrix& t, int n0, const TolerancePolicy& tol) {
  tol.validate();
  require_square(t, "peripheral_vector");
  require_finite(t, "peripheral_vector");
  (void)n0;
  double r = numkit::spectral_radius(t);
  if (r < 1.0 - tol.tol_rel)
    fail(ErrorCode::RadiusBelowOne, "peripheral_vector requires r(T) >= 1");
  Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) fail(ErrorCode::SingularPencil, "eigenvector iteration failed");
  Eigen::Index which = 0;
  es.eigenvalues().cwiseAbs().maxCoeff(&which);
  Vector v = es.eigenvectors().col(which);
  return v / v.norm();
}

CrsimProfile crsim_profile(const Matrix& a, const std::vector<double>& t_grid, double kappa_max,
                           const TolerancePolicy& tol) {
  tol.validate();
  require_square(a, "crsim_profile");
  require_finite(a, "crsim_profile");
  if (t_grid.empty()) fail(ErrorCode::BadParams, "crsim_profile needs a nonempty grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (t_grid[i] <= 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      fail(ErrorCode::BadParams, "time grid must be positive and increasing");

  CrsimProfile prof;
  prof.rows.reserve(t_grid.size());
  const MetricCertificate* seed = nullptr;
  double prev_time = 0.0;
  for (double t : t_grid) {
    // A certificate at time s also certifies any integer multiple of s, so
    // carry it upward as a feasible anchor; this also pins the dyadic
    // monotonicity of the reported values.
    bool integer_multiple =
        seed && std::abs(t / prev_time - std::round(t / prev_time)) <= 1e-9;
    ConstantResult res = detail::similarity_constant_seeded(
        numkit::matexp(a, t), kappa_max, tol, integer_multiple ? seed : nullptr);
    prof.rows.push_back(CrsimRow{t, std::move(res)});
    if (prof.rows.back().result.certificate) {
      seed = &*prof.rows.back().result.certificate;
      prev_time = t;
    } else {
      seed = nullptr;
    }
  }

  prof.semigroup = semigroup_constant(a, kappa_max, tol);

  bool all_similar = true, none_similar = true;
  double sup = 0.0;
  for (const auto& row : prof.rows) {
    if (row.result.verdict == Verdict::Similar) {
      none_similar = false;
      sup = std::max(sup, row.result.constant);
    } else {
      all_similar = false;
    }
  }
  prof.sup_constant = sup;

  if (prof.semigroup.verdict == Verdict::Similar && all_similar) {
    bool ok = sup <= prof.semigroup.constant * (1.0 + 5e-2) + 1e-9;
    for (std::size_t i = 0; ok && i < prof.rows.size(); ++i)
      for (std::size_t j = i + 1; j < prof.rows.size(); ++j) {
        if (std::abs(prof.rows[j].time - 2.0 * prof.rows[i].time) >
            1e-9 * std::max(1.0, prof.rows[j].time))
          continue;
        if (prof.rows[j].result.constant > prof.rows[i].result.constant + 1e-6) ok = false;
      }
    prof.consistent = ok;
  } else {
    prof.consistent = prof.semigroup.verdict != Verdict::Similar && none_similar;
  }
  return prof;
}

bool certificate_valid_discrete(const Matrix& t, const MetricCertificate& cert,
                                const TolerancePolicy& tol) {
  if (cert.p.rows() != t.rows()) return false;
  double slack = tol.tol_psd * std::max(1.0, cert.kappa);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(cert.p), Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (lmin < 1.0 - slack || lmax > cert.kappa * (1.0 + tol.tol_psd) + slack) return false;
  double scale = std::exp(2.0 * cert.rate);  // discrete rate acts as |T|_P <= e^{rate}
  Matrix defect = scale * cert.p - t.adjoint() * cert.p * t;
  return numkit::min_eig(hermitize(defect), tol) >= -slack;
}

bool certificate_valid_continuous(const Matrix& a, const MetricCertificate& cert,
                                  const TolerancePolicy& tol) {
  if (cert.p.rows() != a.rows()) return false;
  double slack = tol.tol_psd * std::max(1.0, cert.kappa);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(cert.p), Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (lmin < 1.0 - slack || lmax > cert.kappa * (1.0 + tol.tol_psd) + slack) return false;
  Matrix shifted = a - cert.rate * Matrix::Identity(a.rows(), a.cols());
  Matrix defect = -(shifted.adjoint() * cert.p + cert.p * shifted);
  double norm_scale = std::max(1.0, numkit::op_norm(a)) * std::max(1.0, cert.kappa);
  return numkit::min_eig(hermitize(defect), tol) >= -tol.tol_psd * norm_scale;
}

void write_certificate(std::ostream& out, const MetricCertificate& cert) {
  out << "kappa=" << io::format_double(cert.kappa) << " rate=" << io::format_double(cert.rate)
      << " residual=" << io::format_double(cert.residual) << '\n';
  io::write_matrix(out, cert.p);
}

MetricCertificate read_certificate(std::istream& in, const std::string& origin) {
  std::string header;
  if (!std::getline(in, header)) fail(ErrorCode::ParseError, origin + ": missing header");
  MetricCertificate cert;
  if (std::sscanf(header.c_str(), "kappa=%lf rate=%lf residual=%lf", &cert.kappa, &cert.rate,
                  &cert.residual) != 3)
    fail(ErrorCode::ParseError, origin + ": bad certificate header");
  cert.p = io::read_matrix(in, origin);
  return cert;
}

}  // namespace simlab::simcert
