#pragma once

#include <cstdint>

#include "simlab/types.hpp"

namespace simlab {

/// Deterministic 64-bit generator (splitmix64). Used instead of <random>
/// distributions so that identical seeds give identical streams on every
/// platform and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  Complex unit_complex() {
    const double two_pi = 6.283185307179586476925286766559;
    double phi = two_pi * uniform();
    return Complex(std::cos(phi), std::sin(phi));
  }

  /// Dense complex matrix with entries uniform in the centered unit square.
  Matrix matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    return m;
  }

  Matrix real_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = Complex(uniform(-1.0, 1.0), 0.0);
    return m;
  }

private:
  std::uint64_t state_;
};

}  // namespace simlab
