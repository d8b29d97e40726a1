#include "ssc/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ssc/kernels.hpp"

namespace ssc {

SymMatrix::SymMatrix(std::size_t n, std::vector<double> entries) : n_(n), data_(std::move(entries)) {
  if (n_ < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
  if (data_.size() != n_ * n_) throw std::invalid_argument("SymMatrix: entry count != n*n");
  symmetrize();
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  n_ = rows.size();
  if (n_ < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
  data_.assign(n_ * n_, 0.0);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n_) throw std::invalid_argument("SymMatrix: ragged initializer");
    std::size_t j = 0;
    for (double v : row) data_[i * n_ + j++] = v;
    ++i;
  }
  symmetrize();
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1.0;
  return m;
}

void SymMatrix::symmetrize() {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = 0.5 * (data_[i * n_ + j] + data_[j * n_ + i]);
      data_[i * n_ + j] = v;
      data_[j * n_ + i] = v;
    }
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.n_ != n_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.n_ != n_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

std::vector<double> SymMatrix::row_sums() const {
  std::vector<double> r(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += data_[i * n_ + j];
    r[i] = s;
  }
  return r;
}

double SymMatrix::min_entry() const { return *std::min_element(data_.begin(), data_.end()); }

double SymMatrix::max_entry() const { return *std::max_element(data_.begin(), data_.end()); }

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

namespace {

// Householder reduction of a full symmetric matrix to tridiagonal form,
// accumulating the transformation in v (column-major eigenvector layout:
// v[k*n+j] is component k of basis vector j). d receives the diagonal,
// e the subdiagonal. Classic EISPACK tred2 scheme.
void tred2(std::size_t n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e) {
  for (std::size_t j = 0; j < n; ++j) d[j] = v[(n - 1) * n + j];

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::fabs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v[(i - 1) * n + j];
        v[i * n + j] = 0.0;
        v[j * n + i] = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v[j * n + i] = f;
        g = e[j] + v[j * n + j] * f;
        for (std::size_t k = j + 1; k + 1 <= i; ++k) {
          g += v[k * n + j] * d[k];
          e[k] += v[k * n + j] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k + 1 <= i; ++k) v[k * n + j] -= f * e[k] + g * d[k];
        d[j] = v[(i - 1) * n + j];
        v[i * n + j] = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate transformations.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v[(n - 1) * n + i] = v[i * n + i];
    v[i * n + i] = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v[k * n + (i + 1)] / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v[k * n + (i + 1)] * v[k * n + j];
        for (std::size_t k = 0; k <= i; ++k) v[k * n + j] -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v[k * n + (i + 1)] = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v[(n - 1) * n + j];
    v[(n - 1) * n + j] = 0.0;
  }
  v[(n - 1) * n + (n - 1)] = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL sweep on the tridiagonal (d, e), rotating the
// accumulated basis v along. EISPACK tql2 scheme.
void tql2(std::size_t n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::fabs(e[m]) <= eps * tst1) break;
      ++m;
    }

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 64) throw std::runtime_error("eig: QL sweep failed to converge");

        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t i1 = m; i1 > l; --i1) {
          const std::size_t i = i1 - 1;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);

          for (std::size_t k = 0; k < n; ++k) {
            h = v[k * n + (i + 1)];
            v[k * n + (i + 1)] = s * v[k * n + i] + c * h;
            v[k * n + i] = c * v[k * n + i] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::fabs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

EigenPair eig(const SymMatrix& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n * n; ++i)
    if (!std::isfinite(x.data()[i]))
      throw std::invalid_argument("eig: input has non-finite entries");

  EigenPair ep;
  ep.n = n;
  ep.vectors.assign(x.data(), x.data() + n * n);
  ep.values.assign(n, 0.0);

  if (n == 1) {
    ep.vectors[0] = 1.0;
    ep.values[0] = x(0, 0);
    return ep;
  }

  std::vector<double> e(n, 0.0);
  tred2(n, ep.vectors, ep.values, e);
  tql2(n, ep.vectors, ep.values, e);

  // Sort descending, permuting columns along.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ep.values[a] > ep.values[b]; });
  std::vector<double> vals(n);
  std::vector<double> vecs(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    vals[j] = ep.values[order[j]];
    for (std::size_t i = 0; i < n; ++i) vecs[i * n + j] = ep.vectors[i * n + order[j]];
  }
  ep.values = std::move(vals);
  ep.vectors = std::move(vecs);
  return ep;
}

SymMatrix spectral_part(const EigenPair& ep, bool keep_positive) {
  const std::size_t n = ep.n;
  double max_abs = 0.0;
  for (double l : ep.values) max_abs = std::max(max_abs, std::fabs(l));
  const double thresh = kEigZeroRel * max_abs;

  // Compact the contributing columns so the reconstruction loop is dense.
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = ep.values[j];
    if (keep_positive ? l > thresh : l < -thresh) cols.push_back(j);
  }
  SymMatrix out(n);
  if (cols.empty()) return out;

  const std::size_t m = cols.size();
  std::vector<double> vc(n * m);
  std::vector<double> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    w[k] = ep.values[cols[k]];
    for (std::size_t i = 0; i < n; ++i) vc[i * m + k] = ep.vec(i, cols[k]);
  }
  kernels::weighted_gram(n, m, vc.data(), w.data(), out.data());
  out.symmetrize();
  return out;
}

SymMatrix positive_part(const SymMatrix& x) { return spectral_part(eig(x), true); }

SymMatrix negative_part(const SymMatrix& x) { return spectral_part(eig(x), false); }

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
  double s = 0.0;
  const std::size_t nn = a.size() * a.size();
  for (std::size_t i = 0; i < nn; ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double fro_norm_sq(const SymMatrix& x) { return inner(x, x); }

double fro_norm(const SymMatrix& x) { return std::sqrt(fro_norm_sq(x)); }

}  // namespace ssc
