#include "simlab/lmi.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace simlab::lmi {

namespace {

// The engine is templated on the matrix type so that real input data runs in
// real symmetric coordinates (half the parameters, quarter the flops).
template <typename Mat>
class Engine {
  using Scalar = typename Mat::Scalar;
  using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1>;
  static constexpr bool kComplex = Eigen::NumTraits<Scalar>::IsComplex;

public:
  Engine(BlockKind kind, Mat op, double kappa, const TolerancePolicy& tol)
      : kind_(kind), op_(std::move(op)), kappa_(kappa), tol_(tol), n_(op_.rows()) {
    oph_ = op_.adjoint();
    m_ = kComplex ? n_ * n_ : n_ * (n_ + 1) / 2;
  }

  FeasibilityResult run(double feas_target, const Mat* warm) {
    const double scale = std::max(1.0, kappa_);
    Mat p = warm ? clip_warm(*warm) : Mat(mid_identity());
    FeasibilityResult out;
    out.p = complexify(p);

    double best_slack = min_slack(p);
    out.min_slack = best_slack;
    if (best_slack >= feas_target) {
      out.status = Status::Feasible;
      return out;
    }

    int steps = 0;
    int stagnant_rounds = 0;
    const int max_rounds = std::max(tol_.max_iter, 40);
    for (int round = 0; round < max_rounds && steps < tol_.max_iter; ++round) {
      double s = min_slack(p);
      if (s >= feas_target) break;

      // Level shift strictly below the current min slack. The gap shrinks as
      // the iterate approaches the max-min-slack point.
      double gap = std::max({0.35 * std::abs(s), 0.05 * spread(p), 1e-9 * scale});
      double sigma = s - gap;

      bool moved = center(p, sigma, feas_target, steps);

      double s_new = min_slack(p);
      if (s_new > best_slack + 1e-12 * scale) {
        best_slack = s_new;
        stagnant_rounds = 0;
      } else {
        ++stagnant_rounds;
      }
      if (s_new >= feas_target) break;
      if (!moved || stagnant_rounds >= 20) {
        out.status = Status::Stalled;
        out.p = complexify(p);
        out.min_slack = s_new;
        out.newton_steps = steps;
        return out;
      }
    }

    double s_final = min_slack(p);
    out.p = complexify(p);
    out.min_slack = s_final;
    out.newton_steps = steps;
    out.status = s_final >= feas_target ? Status::Feasible
                 : steps >= tol_.max_iter ? Status::IterBudget
                                          : Status::Stalled;
    return out;
  }

  double min_slack(const Mat& p) const {
    double lo = std::numeric_limits<double>::infinity();
    for (int b = 0; b < 3; ++b) {
      Eigen::SelfAdjointEigenSolver<Mat> es(block(b, p), Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
  }

private:
  Mat mid_identity() const { return 0.5 * (1.0 + kappa_) * Mat::Identity(n_, n_); }

  Mat clip_warm(const Mat& warm) const {
    // Spectral clip into the open box [1+d, kappa-d] so the first two blocks
    // start strictly positive.
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (warm + Mat(warm.adjoint())));
    double d = 1e-3 * std::max(1.0, kappa_ - 1.0);
    Vec ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      ev(i) = std::clamp(ev(i), 1.0 + 1e-6, std::max(1.0 + 2e-6, kappa_ - d));
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }

  Mat block(int which, const Mat& p) const {
    switch (which) {
      case 0: return p - Mat::Identity(n_, n_);
      case 1: return kappa_ * Mat::Identity(n_, n_) - p;
      default:
        if (kind_ == BlockKind::Discrete) return p - Mat(oph_ * p * op_);
        return Mat(-(oph_ * p + p * op_));
    }
  }

  double spread(const Mat& p) const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int b = 0; b < 3; ++b) {
      Eigen::SelfAdjointEigenSolver<Mat> es(block(b, p), Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
      hi = std::max(hi, es.eigenvalues().minCoeff());
    }
    return hi - lo;
  }

  static Matrix complexify(const Mat& p) {
    if constexpr (kComplex)
      return p;
    else
      return p.template cast<Complex>();
  }

  // ---- barrier machinery -------------------------------------------------

  struct BarrierState {
    std::array<Mat, 3> ginv;  // (S_b - sigma I)^{-1}
    double value = 0.0;       // -sum log det(S_b - sigma I)
    bool ok = false;
  };

  BarrierState barrier(const Mat& p, double sigma) const {
    BarrierState st;
    st.value = 0.0;
    for (int b = 0; b < 3; ++b) {
      Mat s = block(b, p);
      s.diagonal().array() -= sigma;
      Eigen::LLT<Mat> llt(s);
      if (llt.info() != Eigen::Success) return st;
      st.ginv[b] = llt.solve(Mat::Identity(n_, n_));
      double logdet = 0.0;
      for (Eigen::Index i = 0; i < n_; ++i) logdet += std::log(std::real(llt.matrixL()(i, i)));
      st.value -= 2.0 * logdet;
    }
    st.ok = true;
    return st;
  }

  double barrier_value(const Mat& p, double sigma, bool& ok) const {
    ok = false;
    double value = 0.0;
    for (int b = 0; b < 3; ++b) {
      Mat s = block(b, p);
      s.diagonal().array() -= sigma;
      Eigen::LLT<Mat> llt(s);
      if (llt.info() != Eigen::Success) return 0.0;
      for (Eigen::Index i = 0; i < n_; ++i) value -= 2.0 * std::log(std::real(llt.matrixL()(i, i)));
    }
    ok = true;
    return value;
  }

  Mat gradient(const BarrierState& st) const {
    Mat g = -st.ginv[0] + st.ginv[1];
    if (kind_ == BlockKind::Discrete)
      g += -st.ginv[2] + Mat(op_ * st.ginv[2] * oph_);
    else
      g += Mat(op_ * st.ginv[2] + st.ginv[2] * oph_);
    return 0.5 * (g + Mat(g.adjoint()));
  }

  Mat hvp(const BarrierState& st, const Mat& e) const {
    Mat h = st.ginv[0] * e * st.ginv[0] + st.ginv[1] * e * st.ginv[1];
    if (kind_ == BlockKind::Discrete) {
      Mat a = e - Mat(oph_ * e * op_);
      Mat y = st.ginv[2] * a * st.ginv[2];
      h += y - Mat(op_ * y * oph_);
    } else {
      Mat a = -(oph_ * e + e * op_);
      Mat y = st.ginv[2] * a * st.ginv[2];
      h += -(op_ * y + y * oph_);
    }
    return 0.5 * (h + Mat(h.adjoint()));
  }

  // ---- Hermitian <-> real coordinates ------------------------------------

  Vec to_vec(const Mat& x) const {
    Vec v(m_);
    Eigen::Index k = 0;
    const double rt2 = std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n_; ++i) v(k++) = std::real(x(i, i));
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = i + 1; j < n_; ++j) {
        v(k++) = rt2 * std::real(x(i, j));
        if constexpr (kComplex) v(k++) = rt2 * std::imag(x(i, j));
      }
    return v;
  }

  Mat from_vec(const Vec& v) const {
    Mat x = Mat::Zero(n_, n_);
    Eigen::Index k = 0;
    const double rt2inv = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n_; ++i) x(i, i) = v(k++);
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = i + 1; j < n_; ++j) {
        double re = v(k++) * rt2inv;
        double im = 0.0;
        if constexpr (kComplex) im = v(k++) * rt2inv;
        if constexpr (kComplex) {
          x(i, j) = Complex(re, im);
          x(j, i) = Complex(re, -im);
        } else {
          x(i, j) = re;
          x(j, i) = re;
        }
      }
    return x;
  }

  Mat basis_element(Eigen::Index k) const {
    Vec v = Vec::Zero(m_);
    v(k) = 1.0;
    return from_vec(v);
  }

  // tr(E X E Y) for the k-th basis element; the building block of the exact
  // Jacobi diagonal.
  static double tr_exey(const Mat& x, const Mat& y, Eigen::Index i, Eigen::Index j, int type) {
    if (type == 0) return std::real(x(i, i) * y(i, i));
    // E = a e_i e_j^T + conj(a) e_j e_i^T with a = 1/sqrt(2) (type 1) or
    // i/sqrt(2) (type 2); tr = a^2 X_ji Y_ji + |a|^2 (X_jj Y_ii + X_ii Y_jj)
    // + conj(a)^2 X_ij Y_ij.
    Scalar cross = x(j, j) * y(i, i) + x(i, i) * y(j, j);
    double out;
    if (type == 1)
      out = 0.5 * std::real(x(j, i) * y(j, i) + cross + x(i, j) * y(i, j));
    else
      out = 0.5 * std::real(-x(j, i) * y(j, i) + cross - x(i, j) * y(i, j));
    return out;
  }

  Vec jacobi_diagonal(const BarrierState& st) const {
    Vec d(m_);
    const Mat& g1 = st.ginv[0];
    const Mat& g2 = st.ginv[1];
    const Mat& g3 = st.ginv[2];
    Mat x1, y1, m3;
    if (kind_ == BlockKind::Discrete) {
      x1 = g3 * oph_;  // G T*
      y1 = op_ * g3;   // T G
      m3 = op_ * g3 * oph_;
    } else {
      x1 = g3 * oph_;  // G B*
      y1 = op_ * g3;   // B G
      m3 = op_ * g3 * oph_;
    }
    Eigen::Index k = 0;
    auto entry = [&](Eigen::Index i, Eigen::Index j, int type) {
      double v = tr_exey(g1, g1, i, j, type) + tr_exey(g2, g2, i, j, type);
      if (kind_ == BlockKind::Discrete) {
        // tr(A(E) G A(E) G) with A(E) = E - T*ET.
        v += tr_exey(g3, g3, i, j, type) - 2.0 * tr_exey(x1, y1, i, j, type) +
             tr_exey(m3, m3, i, j, type);
      } else {
        // tr(L(E) G L(E) G) with L(E) = B*E + EB.
        v += tr_exey(x1, x1, i, j, type) + tr_exey(y1, y1, i, j, type) +
             2.0 * tr_exey(g3, m3, i, j, type);
      }
      return std::max(v, 1e-300);
    };
    for (Eigen::Index i = 0; i < n_; ++i) d(k++) = entry(i, i, 0);
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = i + 1; j < n_; ++j) {
        d(k++) = entry(i, j, 1);
        if constexpr (kComplex) d(k++) = entry(i, j, 2);
      }
    return d;
  }

  Vec newton_direction_dense(const BarrierState& st, const Vec& minus_grad) const {
    Eigen::MatrixXd h(m_, m_);
    for (Eigen::Index k = 0; k < m_; ++k) h.col(k) = to_vec(hvp(st, basis_element(k)));
    h = 0.5 * (h + h.transpose());
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success) return minus_grad;
    Vec dir = ldlt.solve(minus_grad);
    if (!dir.allFinite()) return minus_grad;
    return dir;
  }

  Vec newton_direction_cg(const BarrierState& st, const Vec& minus_grad) const {
    Vec dinv = jacobi_diagonal(st).cwiseMax(1e-300).cwiseInverse();
    auto apply = [&](const Vec& v) { return to_vec(hvp(st, from_vec(v))); };

    Vec x = Vec::Zero(m_);
    Vec r = minus_grad;
    Vec z = dinv.cwiseProduct(r);
    Vec pdir = z;
    double rz = r.dot(z);
    double r0 = std::sqrt(r.dot(r));
    if (!(r0 > 0.0)) return x;
    const int max_cg = std::min<Eigen::Index>(m_, 600);
    for (int it = 0; it < max_cg; ++it) {
      Vec hp = apply(pdir);
      double php = pdir.dot(hp);
      if (!(php > 0.0) || !std::isfinite(php)) break;
      double alpha = rz / php;
      x += alpha * pdir;
      r -= alpha * hp;
      if (std::sqrt(r.dot(r)) <= 1e-2 * r0) break;
      Vec z_new = dinv.cwiseProduct(r);
      double rz_new = r.dot(z_new);
      pdir = z_new + (rz_new / rz) * pdir;
      z = z_new;
      rz = rz_new;
    }
    if (x.dot(minus_grad) <= 0.0 || !x.allFinite()) return dinv.cwiseProduct(minus_grad);
    return x;
  }

  // A few damped Newton steps of the shifted barrier. Returns false when no
  // step could be taken at all.
  bool center(Mat& p, double sigma, double feas_target, int& steps) {
    bool moved = false;
    const int inner = 6;
    const bool dense = m_ <= 900;
    for (int it = 0; it < inner && steps < tol_.max_iter; ++it) {
      BarrierState st = barrier(p, sigma);
      if (!st.ok) return moved;
      Mat grad = gradient(st);
      Vec minus_grad = -to_vec(grad);
      Vec dir = dense ? newton_direction_dense(st, minus_grad) : newton_direction_cg(st, minus_grad);
      double decrement = dir.dot(minus_grad);
      if (!(decrement > 0.0)) return moved;
      Mat step = from_vec(dir);
      ++steps;

      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        Mat cand = p + t * step;
        bool ok = false;
        double val = barrier_value(cand, sigma, ok);
        if (ok && val <= st.value - 1e-4 * t * decrement) {
          p = cand;
          accepted = true;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) return moved;
      if (min_slack_above(p, feas_target)) return true;
      if (decrement < 0.1) return moved;  // centered enough for this shift
    }
    return moved;
  }

  // Cheap binary certificate: all blocks minus target are LLT-positive.
  bool min_slack_above(const Mat& p, double target) const {
    for (int b = 0; b < 3; ++b) {
      Mat s = block(b, p);
      s.diagonal().array() -= target;
      Eigen::LLT<Mat> llt(s);
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  }

  BlockKind kind_;
  Mat op_;
  Mat oph_;
  double kappa_;
  TolerancePolicy tol_;
  Eigen::Index n_;
  Eigen::Index m_;
};

}  // namespace

double block_min_slack(BlockKind kind, const Matrix& op, double kappa, const Matrix& p) {
  Engine<Matrix> eng(kind, op, kappa, TolerancePolicy{});
  return eng.min_slack(p);
}

FeasibilityResult find_feasible(BlockKind kind, const Matrix& op, double kappa,
                                const TolerancePolicy& tol, double feas_target,
                                const Matrix* warm_start) {
  tol.validate();
  require_square(op, "find_feasible");
  require_finite(op, "find_feasible");
  if (!(kappa >= 1.0)) fail(ErrorCode::BadParams, "find_feasible: kappa must be >= 1");

  bool real_ok = is_real(op, 0.0) && (!warm_start || is_real(*warm_start, 0.0));
  if (real_ok) {
    Eigen::MatrixXd op_r = op.real();
    Eigen::MatrixXd warm_r;
    const Eigen::MatrixXd* warm_p = nullptr;
    if (warm_start) {
      warm_r = warm_start->real();
      warm_p = &warm_r;
    }
    Engine<Eigen::MatrixXd> eng(kind, op_r, kappa, tol);
    return eng.run(feas_target, warm_p);
  }
  Engine<Matrix> eng(kind, op, kappa, tol);
  return eng.run(feas_target, warm_start);
}

}  // namespace simlab::lmi
