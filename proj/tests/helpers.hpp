#pragma once

// Shared test utilities: generators and small independent oracles. These
// stay deliberately naive (plain loops, no reuse of the library's fast
// paths) so they can certify the implementation.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ssc/random.hpp"
#include "ssc/symmat.hpp"

namespace test {

inline ssc::SymMatrix random_sym(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                 double hi = 1.0) {
  ssc::Rng rng(seed);
  ssc::SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, rng.uniform(lo, hi));
  return m;
}

// Random PSD matrix as A^T A from a random square factor.
inline ssc::SymMatrix random_psd(std::size_t n, std::uint64_t seed) {
  ssc::Rng rng(seed);
  std::vector<double> a(n * n);
  for (double& v : a) v = rng.uniform(-1.0, 1.0);
  ssc::SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a[k * n + i] * a[k * n + j];
      m.set(i, j, s);
    }
  return m;
}

// out = A * B, plain triple loop on row-major squares.
inline std::vector<double> naive_matmul(const std::vector<double>& a, const std::vector<double>& b,
                                        std::size_t n) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

inline double max_abs_diff(const ssc::SymMatrix& a, const ssc::SymMatrix& b) {
  double m = 0.0;
  const std::size_t nn = a.size() * a.size();
  for (std::size_t i = 0; i < nn; ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

// Dense symmetric-positive-definite solve by Gaussian elimination with
// partial pivoting; the oracle for the quadratic quasi-Newton test.
inline std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b,
                                        std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (std::fabs(a[piv * n + col]) < 1e-14) throw std::runtime_error("solve_linear: singular");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

}  // namespace test
