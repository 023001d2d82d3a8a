#include "simlab/gallery.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "simlab/numkit.hpp"

namespace simlab::gallery {

namespace {

[[noreturn]] void bad_param(const std::string& model, const std::string& field,
                            const std::string& why) {
  fail(ErrorCode::BadParams, model + ": parameter '" + field + "' " + why);
}

double need_scalar(const ModelSpec& spec, const std::string& field) {
  auto it = spec.scalars.find(field);
  if (it == spec.scalars.end()) bad_param(spec.name, field, "is required");
  return it->second;
}

long need_positive_int(const ModelSpec& spec, const std::string& field) {
  double v = need_scalar(spec, field);
  long n = std::lround(v);
  if (n < 1 || std::abs(v - static_cast<double>(n)) > 1e-9)
    bad_param(spec.name, field, "must be a positive integer");
  return n;
}

double scalar_or(const ModelSpec& spec, const std::string& field, double fallback) {
  auto it = spec.scalars.find(field);
  return it == spec.scalars.end() ? fallback : it->second;
}

long integer_time(double t, const char* who) {
  if (t < 0.0) fail(ErrorCode::NegativeTime, std::string(who) + ": t must be >= 0");
  long n = std::lround(t);
  if (std::abs(t - static_cast<double>(n)) > 1e-9 * std::max(1.0, t))
    fail(ErrorCode::NotGridAligned, std::string(who) + ": t must be an integer");
  return n;
}

long grid_steps(double t, long density, const char* who) {
  if (t < 0.0) fail(ErrorCode::NegativeTime, std::string(who) + ": t must be >= 0");
  double s = t * static_cast<double>(density);
  long n = std::lround(s);
  if (std::abs(s - static_cast<double>(n)) > 1e-9 * std::max(1.0, s))
    fail(ErrorCode::NotGridAligned, std::string(who) + ": t is not grid aligned");
  return n;
}

// Lanczos approximation (g = 7, 9 terms); relative error below 1e-10 on the
// times this library samples.
double gamma_fn(double x) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059, 12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    const double pi = 3.1415926535897932384626433832795;
    return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = c[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
  const double sqrt_two_pi = 2.5066282746310005024157652848110;
  return sqrt_two_pi * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

long pow3(long k) {
  long v = 1;
  for (long i = 0; i < k; ++i) v *= 3;
  return v;
}

Matrix lemerdy_basis_default(long n, double gamma) {
  Matrix b = Matrix::Identity(n, n);
  for (long k = 1; k < n; ++k)
    for (long j = 0; j < k; ++j)
      b(j, k) += gamma * ((j % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(k - j);
  return b;
}

Matrix near_parallel_basis(long n, double delta) {
  Matrix b = Matrix::Zero(n, n);
  for (long k = 0; k < n; ++k) {
    b(0, k) = 1.0;
    if (k > 0) b(k, k) = delta;
  }
  b(0, 0) = 1.0;
  return b;
}

const Matrix& need_matrix(const ModelSpec& spec, const std::string& field) {
  auto it = spec.matrices.find(field);
  if (it == spec.matrices.end()) bad_param(spec.name, field, "is required");
  return it->second;
}

struct LemerdyParts {
  Matrix basis;
  Matrix basis_inv;
  Eigen::VectorXd decay;  // 2^n, n = 1..N
};

LemerdyParts lemerdy_parts(const Matrix& basis) {
  LemerdyParts parts;
  parts.basis = basis;
  Eigen::PartialPivLU<Matrix> lu(basis);
  parts.basis_inv = lu.inverse();
  if (!parts.basis_inv.allFinite())
    fail(ErrorCode::BadParams, "lemerdy: basis matrix is singular");
  long n = basis.rows();
  parts.decay.resize(n);
  for (long k = 0; k < n; ++k) parts.decay(k) = std::pow(2.0, static_cast<double>(k + 1));
  return parts;
}

Matrix lemerdy_sample(const Matrix& basis, double t) {
  LemerdyParts parts = lemerdy_parts(basis);
  Matrix d = Matrix::Zero(basis.rows(), basis.cols());
  for (long k = 0; k < basis.rows(); ++k) d(k, k) = std::exp(-parts.decay(k) * t);
  return parts.basis * d * parts.basis_inv;
}

Matrix lemerdy_generator(const Matrix& basis) {
  LemerdyParts parts = lemerdy_parts(basis);
  Matrix d = Matrix::Zero(basis.rows(), basis.cols());
  for (long k = 0; k < basis.rows(); ++k) d(k, k) = -parts.decay(k);
  return parts.basis * d * parts.basis_inv;
}

Matrix riemann_liouville_sample(long m, double t) {
  if (t == 0.0) return Matrix::Identity(m, m);
  // Product rule with the weakly singular kernel integrated exactly per cell:
  // piecewise constant data, collocation at cell centers.
  double h = 1.0 / static_cast<double>(m);
  double g = gamma_fn(t);
  Matrix out = Matrix::Zero(m, m);
  for (long i = 0; i < m; ++i) {
    double xi = (static_cast<double>(i) + 0.5) * h;
    for (long j = 0; j < i; ++j) {
      double lo = xi - static_cast<double>(j + 1) * h;
      double hi = xi - static_cast<double>(j) * h;
      out(i, j) = (std::pow(hi, t) - std::pow(lo, t)) / (t * g);
    }
    out(i, i) = std::pow(0.5 * h, t) / (t * g);
  }
  return out;
}

Matrix nilshift_sample(long m, double t) {
  long steps = grid_steps(t, m, "nilshift");
  Matrix out = Matrix::Zero(m, m);
  for (long i = steps; i < m; ++i) out(i, i - steps) = 1.0;
  if (steps >= m) out.setZero();
  return out;
}

// Grid cells on [0, L] with density q; cell i covers ((i)/q, (i+1)/q] and is
// collocated at its center.
struct HalfLineGrid {
  long q = 1;
  long cells = 0;
  double center(long i) const { return (static_cast<double>(i) + 0.5) / static_cast<double>(q); }
};

Matrix packel_vj_sample(const std::string& index_set, long big_k, long q, double t) {
  long l = pow3(big_k) + 1;
  HalfLineGrid grid{q, q * l};
  long tq = grid_steps(t, q, "packel_vj");
  Matrix out = Matrix::Zero(grid.cells, grid.cells);
  if (tq == 0) return out;  // V(0) = 0

  // n0(t): the n in the index set with 3^n < t <= 3^{n+1}, with the edge
  // rules for Z- (t > 3 -> n0 = 0) and Z+ (t <= 1 -> no lowest band).
  long n_min_set, n_max_set;
  long v3 = 0;
  for (long w = q; w % 3 == 0; w /= 3) ++v3;
  if (index_set == "Z+") {
    n_min_set = 0;
    n_max_set = big_k;
  } else if (index_set == "Z-") {
    n_min_set = -v3;
    n_max_set = 0;
  } else if (index_set == "Z") {
    n_min_set = -v3;
    n_max_set = big_k;
  } else {
    fail(ErrorCode::BadParams, "packel_vj: index_set must be Z, Z+ or Z-");
  }

  bool n0_finite = false;
  long n0 = 0;
  for (long n = n_min_set; n <= n_max_set; ++n) {
    double p = std::pow(3.0, static_cast<double>(n));
    if (p < t && t <= 3.0 * p) {
      n0 = n;
      n0_finite = true;
      break;
    }
  }
  if (!n0_finite) {
    if (index_set == "Z-" && t > 3.0) {
      n0 = 0;
      n0_finite = true;
    }
    // Z+ with t <= 1: lowest band empty, all of Z+ contributes.
  }

  auto band_cells = [&](double lo, double hi, bool closed_lo) {
    // cells fully inside (lo, hi] (or [lo, hi] when closed_lo): cell i covers
    // (i/q, (i+1)/q].
    long first = closed_lo ? static_cast<long>(std::llround(lo * q))
                           : static_cast<long>(std::llround(lo * q));
    long last = static_cast<long>(std::llround(hi * q)) - 1;
    first = std::max<long>(first, 0);
    last = std::min<long>(last, grid.cells - 1);
    return std::pair<long, long>(first, last);
  };

  // Reflected bands I_n(t) = (3^n - t, 3^n], n > n0 in the index set.
  long start_n = n0_finite ? n0 + 1 : n_min_set;
  for (long n = std::max(start_n, n_min_set); n <= n_max_set; ++n) {
    double p3 = static_cast<double>(pow3(std::abs(n)));
    double p = n >= 0 ? p3 : 1.0 / p3;
    if (p - t < 0.0 && n != n0) continue;  // bands above n0 satisfy 3^n >= t
    auto [first, last] = band_cells(p - t, p, false);
    for (long i = first; i <= last; ++i) {
      // source point 2*3^n - x - t lands exactly on a cell center
      long src = std::llround(2.0 * p * q - t * q) - i - 1;
      if (src >= 0 && src < grid.cells) out(i, src) = 1.0;
    }
  }
  // Lowest band I_{n0}(t) = [0, 2*3^{n0} - t].
  if (n0_finite) {
    double p3 = static_cast<double>(pow3(std::abs(n0)));
    double p = n0 >= 0 ? p3 : 1.0 / p3;
    double hi = 2.0 * p - t;
    if (hi > 0.0) {
      auto [first, last] = band_cells(0.0, hi, true);
      for (long i = first; i <= last; ++i) {
        long src = std::llround(2.0 * p * q - t * q) - i - 1;
        if (src >= 0 && src < grid.cells) out(i, src) = 1.0;
      }
    }
  }
  return out;
}

Matrix benchimol_generator(long big_k, long q, double eps) {
  long mg = q * pow3(big_k);
  Matrix shift = Matrix::Zero(mg, mg);
  for (long i = 1; i < mg; ++i) shift(i, i - 1) = 1.0;
  double qd = static_cast<double>(q);
  Matrix d = qd * (shift - Matrix::Identity(mg, mg));        // smoothed right shift
  Matrix dstar = qd * (shift.transpose() - Matrix::Identity(mg, mg));  // smoothed left shift
  Matrix proj = Matrix::Zero(mg, mg);
  HalfLineGrid grid{q, mg};
  for (long i = 0; i < mg; ++i) {
    double x = grid.center(i);
    for (long n = 1; n <= big_k; ++n) {
      double p = static_cast<double>(pow3(n));
      if (x >= p - 1.0 && x <= p) proj(i, i) = 1.0;
    }
  }
  Matrix a = Matrix::Zero(2 * mg, 2 * mg);
  a.topLeftCorner(mg, mg) = dstar;
  a.topRightCorner(mg, mg) = eps * proj;
  a.bottomRightCorner(mg, mg) = d;
  return a;
}

}  // namespace

Matrix shift_matrix(int n) {
  Matrix s = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) s(i, i - 1) = 1.0;
  return s;
}

Matrix foguel_operator(int n) {
  Matrix s = shift_matrix(n);
  Matrix proj = Matrix::Zero(n, n);
  for (long p = 3; p <= n; p *= 3) proj(p - 1, p - 1) = 1.0;  // coordinates 3, 9, 27, ...
  Matrix t = Matrix::Zero(2 * n, 2 * n);
  t.topLeftCorner(n, n) = s.transpose();
  t.topRightCorner(n, n) = proj;
  t.bottomRightCorner(n, n) = s;
  return t;
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {
      "foguel",   "benchimol",    "packel_vj", "riemann_liouville",  "nilshift",
      "lemerdy",  "chernoff_sum", "eckstein",  "counter_nilpotent"};
  return names;
}

ModelInstance build_model(const ModelSpec& spec) {
  ModelInstance inst;
  inst.spec = spec;
  const std::string& name = spec.name;

  if (name == "foguel") {
    long n = need_positive_int(spec, "N");
    inst.dim = 2 * n;
  } else if (name == "benchimol") {
    long k = need_positive_int(spec, "K");
    long q = need_positive_int(spec, "q");
    double eps = scalar_or(spec, "eps", 1.0);
    inst.dim = 2 * q * pow3(k);
    inst.has_generator = true;
    inst.generator = benchimol_generator(k, q, eps);
  } else if (name == "packel_vj") {
    long k = need_positive_int(spec, "K");
    long q = need_positive_int(spec, "q");
    if (spec.index_set != "Z" && spec.index_set != "Z+" && spec.index_set != "Z-")
      bad_param(name, "index_set", "must be Z, Z+ or Z-");
    inst.dim = q * (pow3(k) + 1);
  } else if (name == "riemann_liouville") {
    long m = need_positive_int(spec, "M");
    inst.dim = m;
  } else if (name == "nilshift") {
    long m = need_positive_int(spec, "M");
    inst.dim = m;
  } else if (name == "lemerdy") {
    Matrix basis = spec.matrices.count("B")
                       ? need_matrix(spec, "B")
                       : lemerdy_basis_default(need_positive_int(spec, "N"),
                                               scalar_or(spec, "gamma", 0.5));
    require_square(basis, "lemerdy basis");
    inst.spec.matrices["B"] = basis;
    inst.dim = basis.rows();
    inst.has_generator = true;
    inst.generator = lemerdy_generator(basis);
  } else if (name == "chernoff_sum") {
    const Matrix& a = need_matrix(spec, "A_inner");
    require_square(a, "chernoff_sum A_inner");
    long n_sum = need_positive_int(spec, "N_sum");
    inst.dim = n_sum * a.rows();
    inst.has_generator = true;
    Matrix gen = Matrix::Zero(inst.dim, inst.dim);
    for (long b = 0; b < n_sum; ++b)
      gen.block(b * a.rows(), b * a.rows(), a.rows(), a.rows()) =
          static_cast<double>(b + 1) * a;
    inst.generator = gen;
  } else if (name == "eckstein") {
    long n = need_positive_int(spec, "N");
    inst.dim = 2 * n * n * n;
  } else if (name == "counter_nilpotent") {
    long m = need_positive_int(spec, "M");
    Matrix basis = spec.matrices.count("B")
                       ? need_matrix(spec, "B")
                       : near_parallel_basis(std::lround(scalar_or(spec, "N", 2)),
                                             scalar_or(spec, "delta", 1e-4));
    require_square(basis, "counter_nilpotent basis");
    inst.spec.matrices["B"] = basis;
    inst.dim = m * basis.rows();
  } else {
    bad_param(name.empty() ? "<empty>" : name, "name", "is not a registered model");
  }
  return inst;
}

Matrix sample(const ModelInstance& instance, double t) {
  const ModelSpec& spec = instance.spec;
  const std::string& name = spec.name;
  if (t < 0.0) fail(ErrorCode::NegativeTime, name + ": t must be >= 0");

  if (name == "foguel") {
    long n = integer_time(t, "foguel");
    return numkit::matrix_power(foguel_operator(std::lround(need_scalar(spec, "N"))), n);
  }
  if (name == "benchimol") return numkit::matexp(instance.generator, t);
  if (name == "packel_vj")
    return packel_vj_sample(spec.index_set, std::lround(need_scalar(spec, "K")),
                            std::lround(need_scalar(spec, "q")), t);
  if (name == "riemann_liouville")
    return riemann_liouville_sample(std::lround(need_scalar(spec, "M")), t);
  if (name == "nilshift") return nilshift_sample(std::lround(need_scalar(spec, "M")), t);
  if (name == "lemerdy") return lemerdy_sample(spec.matrices.at("B"), t);
  if (name == "chernoff_sum") return numkit::matexp(instance.generator, t);
  if (name == "eckstein") {
    long pow = integer_time(t, "eckstein");
    long n = std::lround(need_scalar(spec, "N"));
    Matrix s = shift_matrix(n);
    Matrix base = numkit::kron(numkit::kron(foguel_operator(n), s), Matrix(s.adjoint()));
    return numkit::matrix_power(base, pow);
  }
  if (name == "counter_nilpotent") {
    long m = std::lround(need_scalar(spec, "M"));
    Matrix volterra = riemann_liouville_sample(m, t);
    Matrix shift = nilshift_sample(m, t);
    Matrix lm = lemerdy_sample(spec.matrices.at("B"), t);
    return numkit::kron(Matrix(volterra * shift), lm);
  }
  fail(ErrorCode::BadParams, name + ": not a registered model");
}

Matrix cogenerator(const Matrix& a, const TolerancePolicy& tol) {
  tol.validate();
  require_square(a, "cogenerator");
  require_finite(a, "cogenerator");
  const Eigen::Index n = a.rows();
  Vector evs = numkit::eigenvalues(a);
  double dist = (evs.array() - Complex(1.0, 0.0)).abs().minCoeff();
  if (dist <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    fail(ErrorCode::OneInSpectrum, "cogenerator: 1 is in the spectrum");

  Matrix shifted = a - Matrix::Identity(n, n);
  Eigen::PartialPivLU<Matrix> lu(shifted);
  Matrix inv = lu.inverse();
  Matrix cayley = (a + Matrix::Identity(n, n)) * inv;
  Matrix alt = Matrix::Identity(n, n) + 2.0 * inv;
  double diff = (cayley - alt).cwiseAbs().maxCoeff();
  if (diff > tol.tol_rel * std::max(1.0, cayley.cwiseAbs().maxCoeff()) * 1e3)
    fail(ErrorCode::SingularPencil, "cogenerator: algebraic forms disagree");
  return cayley;
}

}  // namespace simlab::gallery
