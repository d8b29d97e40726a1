#pragma once

#include <cstddef>

// Dense inner kernels. Every kernel comes in two variants: a serial
// reference implementation and an OpenMP one parallelized over output
// rows. Each output element is accumulated in the same order in both
// variants, so the results are bitwise identical; the undecorated name
// dispatches on ssc::parallel::enabled() and the problem size.

namespace ssc::kernels {

// out = sum_k w[k] * v_k v_k^T where v_k is column k of the n-by-m
// compacted basis vc (row-major). out is n-by-n, fully written.
void weighted_gram_serial(std::size_t n, std::size_t m, const double* vc, const double* w,
                          double* out);
void weighted_gram_parallel(std::size_t n, std::size_t m, const double* vc, const double* w,
                            double* out);
void weighted_gram(std::size_t n, std::size_t m, const double* vc, const double* w, double* out);

// out[i*n+j] = squared Euclidean distance between rows i and j of the
// n-by-d row-major matrix x.
void pairwise_sq_dists_serial(std::size_t n, std::size_t d, const double* x, double* out);
void pairwise_sq_dists_parallel(std::size_t n, std::size_t d, const double* x, double* out);
void pairwise_sq_dists(std::size_t n, std::size_t d, const double* x, double* out);

// out = X X^T for row-major X (n-by-d); out is n-by-n.
void gram_rows_serial(std::size_t n, std::size_t d, const double* x, double* out);
void gram_rows_parallel(std::size_t n, std::size_t d, const double* x, double* out);
void gram_rows(std::size_t n, std::size_t d, const double* x, double* out);

// out = X^T X for row-major X (n-by-d); out is d-by-d.
void gram_cols_serial(std::size_t n, std::size_t d, const double* x, double* out);
void gram_cols_parallel(std::size_t n, std::size_t d, const double* x, double* out);
void gram_cols(std::size_t n, std::size_t d, const double* x, double* out);

}  // namespace ssc::kernels
