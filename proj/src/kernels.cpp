#include "ssc/kernels.hpp"

#include <cstdint>

#include "ssc/parallel.hpp"

namespace ssc::kernels {

namespace {

// Flop threshold below which forking a team costs more than it saves.
constexpr double kMinParallelWork = 1e6;

bool go_parallel(double work) { return parallel::enabled() && work >= kMinParallelWork; }

inline double weighted_dot(std::size_t m, const double* a, const double* b, const double* w) {
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) s += w[k] * a[k] * b[k];
  return s;
}

inline double sq_dist(std::size_t d, const double* a, const double* b) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

inline double dot(std::size_t d, const double* a, const double* b) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

void weighted_gram_serial(std::size_t n, std::size_t m, const double* vc, const double* w,
                          double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double s = weighted_dot(m, vc + i * m, vc + j * m, w);
      out[i * n + j] = s;
      out[j * n + i] = s;
    }
  }
}

void weighted_gram_parallel(std::size_t n, std::size_t m, const double* vc, const double* w,
                            double* out) {
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) {
      const double s = weighted_dot(m, vc + i * m, vc + j * m, w);
      out[i * n + j] = s;
      out[j * n + static_cast<std::size_t>(i)] = s;
    }
  }
}

void weighted_gram(std::size_t n, std::size_t m, const double* vc, const double* w, double* out) {
  if (go_parallel(0.5 * static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(m)))
    weighted_gram_parallel(n, m, vc, w, out);
  else
    weighted_gram_serial(n, m, vc, w, out);
}

void pairwise_sq_dists_serial(std::size_t n, std::size_t d, const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = sq_dist(d, x + i * d, x + j * d);
      out[i * n + j] = s;
      out[j * n + i] = s;
    }
  }
}

void pairwise_sq_dists_parallel(std::size_t n, std::size_t d, const double* x, double* out) {
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    out[i * n + static_cast<std::size_t>(i)] = 0.0;
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
      const double s = sq_dist(d, x + i * d, x + j * d);
      out[i * n + j] = s;
      out[j * n + static_cast<std::size_t>(i)] = s;
    }
  }
}

void pairwise_sq_dists(std::size_t n, std::size_t d, const double* x, double* out) {
  if (go_parallel(0.5 * static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(d)))
    pairwise_sq_dists_parallel(n, d, x, out);
  else
    pairwise_sq_dists_serial(n, d, x, out);
}

void gram_rows_serial(std::size_t n, std::size_t d, const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double s = dot(d, x + i * d, x + j * d);
      out[i * n + j] = s;
      out[j * n + i] = s;
    }
  }
}

void gram_rows_parallel(std::size_t n, std::size_t d, const double* x, double* out) {
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) {
      const double s = dot(d, x + i * d, x + j * d);
      out[i * n + j] = s;
      out[j * n + static_cast<std::size_t>(i)] = s;
    }
  }
}

void gram_rows(std::size_t n, std::size_t d, const double* x, double* out) {
  if (go_parallel(0.5 * static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(d)))
    gram_rows_parallel(n, d, x, out);
  else
    gram_rows_serial(n, d, x, out);
}

void gram_cols_serial(std::size_t n, std::size_t d, const double* x, double* out) {
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x[i * d + a] * x[i * d + b];
      out[a * d + b] = s;
      out[b * d + a] = s;
    }
  }
}

void gram_cols_parallel(std::size_t n, std::size_t d, const double* x, double* out) {
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t a = 0; a < static_cast<std::int64_t>(d); ++a) {
    for (std::size_t b = static_cast<std::size_t>(a); b < d; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x[i * d + a] * x[i * d + b];
      out[a * d + b] = s;
      out[b * d + static_cast<std::size_t>(a)] = s;
    }
  }
}

void gram_cols(std::size_t n, std::size_t d, const double* x, double* out) {
  if (go_parallel(0.5 * static_cast<double>(d) * static_cast<double>(d) * static_cast<double>(n)))
    gram_cols_parallel(n, d, x, out);
  else
    gram_cols_serial(n, d, x, out);
}

}  // namespace ssc::kernels
