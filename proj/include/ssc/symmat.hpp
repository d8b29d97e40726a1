#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ssc {

/// Dense real symmetric n-by-n matrix, full row-major storage.
/// Construction symmetrizes as (X + X^T)/2, so data(i,j) == data(j,i) exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  SymMatrix(std::size_t n, std::vector<double> entries);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  void symmetrize();

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double c);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double c) { return a *= c; }
  friend SymMatrix operator*(double c, SymMatrix a) { return a *= c; }

  std::vector<double> row_sums() const;
  double min_entry() const;
  double max_entry() const;
  double max_abs() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Eigenvalues (descending) and the matching orthonormal eigenvector basis.
/// vectors is n-by-n row-major; column j is the eigenvector for values[j].
struct EigenPair {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  double vec(std::size_t i, std::size_t j) const { return vectors[i * n + j]; }
};

/// Full symmetric eigendecomposition (Householder tridiagonalization
/// followed by the implicit-shift QL sweep). Throws on non-finite input.
EigenPair eig(const SymMatrix& x);

/// Spectral positive part X+ = sum_{lambda>0} lambda u u^T; the Frobenius
/// projection of X onto the PSD cone. Eigenvalues with
/// |lambda| <= 1e-12 * max|lambda| count as zero.
SymMatrix positive_part(const SymMatrix& x);

/// X- = X - X+, reconstructed from the negative eigenvalues.
SymMatrix negative_part(const SymMatrix& x);

/// Reconstruct from an existing decomposition; keep_positive selects which
/// side of the zero threshold contributes.
SymMatrix spectral_part(const EigenPair& ep, bool keep_positive);

double inner(const SymMatrix& a, const SymMatrix& b);
double fro_norm_sq(const SymMatrix& x);
double fro_norm(const SymMatrix& x);

/// Relative magnitude below which an eigenvalue is treated as zero.
inline constexpr double kEigZeroRel = 1e-12;

}  // namespace ssc
