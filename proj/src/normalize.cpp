#include "ssc/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssc {

std::string normalizer_name(NormalizerKind kind) {
  switch (kind) {
    case NormalizerKind::none: return "none";
    case NormalizerKind::ratio_cut: return "ratio_cut";
    case NormalizerKind::sinkhorn: return "sinkhorn";
    case NormalizerKind::frobenius_qp: return "frobenius_qp";
    case NormalizerKind::ld_ssc1: return "ld_ssc1";
    case NormalizerKind::ld_ssc2: return "ld_ssc2";
  }
  return "?";
}

std::string normalizer_display_name(NormalizerKind kind) {
  switch (kind) {
    case NormalizerKind::none: return "NO";
    case NormalizerKind::ratio_cut: return "RC";
    case NormalizerKind::sinkhorn: return "NC";
    case NormalizerKind::frobenius_qp: return "FSC";
    case NormalizerKind::ld_ssc1: return "LD-SSC1";
    case NormalizerKind::ld_ssc2: return "LD-SSC2";
  }
  return "?";
}

std::optional<NormalizerKind> parse_normalizer(const std::string& name) {
  for (NormalizerKind k :
       {NormalizerKind::none, NormalizerKind::ratio_cut, NormalizerKind::sinkhorn,
        NormalizerKind::frobenius_qp, NormalizerKind::ld_ssc1, NormalizerKind::ld_ssc2}) {
    if (name == normalizer_name(k) || name == normalizer_display_name(k)) return k;
  }
  return std::nullopt;
}

SymMatrix normalize_none(const SymMatrix& K) { return K; }

SymMatrix normalize_l1(const SymMatrix& K) {
  const std::size_t n = K.size();
  const std::vector<double> rs = K.row_sums();
  SymMatrix r = K;
  for (std::size_t i = 0; i < n; ++i) r.data()[i * n + i] += 1.0 - rs[i];
  return r;
}

NormalizeResult normalize_sinkhorn(const SymMatrix& K, double tol, int max_iter) {
  const std::size_t n = K.size();
  if (K.min_entry() < 0.0)
    throw std::invalid_argument("normalize_sinkhorn: negative entries");

  NormalizeResult res;
  res.K_hat = K;
  res.converged = false;

  double prev_dev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    const std::vector<double> rs = res.K_hat.row_sums();
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rs[i] <= 0.0)
        throw std::invalid_argument("normalize_sinkhorn: zero row sum at row " + std::to_string(i));
      dev = std::max(dev, std::fabs(rs[i] - 1.0));
    }
    if (dev > prev_dev + 1e-12) res.residual_monotone = false;
    prev_dev = dev;
    res.iterations = it - 1;
    if (dev <= tol) {
      res.converged = true;
      return res;
    }

    std::vector<double> inv_sqrt(n);
    for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(rs[i]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        res.K_hat.data()[i * n + j] *= inv_sqrt[i] * inv_sqrt[j];
    res.iterations = it;
  }
  return res;  // best iterate, converged == false
}

NormalizeResult normalize_frobenius_qp(const SymMatrix& K, double tol, int max_iter) {
  const std::size_t n = K.size();

  // Dykstra between the affine set {F 1 = 1, F = F^T} and the nonnegative
  // orthant. The affine projection has the closed form
  // F = X + mu 1^T + 1 mu^T with s = (n - 1^T X 1)/(2n),
  // mu = (1 - X 1 - s 1)/n.
  const auto affine = [n](const SymMatrix& x) {
    const std::vector<double> rs = x.row_sums();
    double total = 0.0;
    for (double v : rs) total += v;
    const double nn = static_cast<double>(n);
    const double s = (nn - total) / (2.0 * nn);
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = (1.0 - rs[i] - s) / nn;
    SymMatrix r = x;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r.data()[i * n + j] += mu[i] + mu[j];
    return r;
  };

  NormalizeResult res;
  res.converged = false;

  SymMatrix x = K;
  SymMatrix corr_affine(n);
  SymMatrix corr_nonneg(n);
  for (int it = 1; it <= max_iter; ++it) {
    SymMatrix shifted = x + corr_affine;
    SymMatrix y = affine(shifted);
    corr_affine = shifted - y;

    shifted = y + corr_nonneg;
    SymMatrix z(n);
    for (std::size_t e = 0; e < n * n; ++e) z.data()[e] = std::max(0.0, shifted.data()[e]);
    corr_nonneg = shifted - z;

    res.iterations = it;
    const double movement = fro_norm(z - x);
    x = std::move(z);

    // x is exactly nonnegative here; only the row sums can still be off.
    double dev = 0.0;
    for (double rsum : x.row_sums()) dev = std::max(dev, std::fabs(rsum - 1.0));
    if (dev <= tol && movement <= tol * std::max(1.0, fro_norm(x))) {
      res.converged = true;
      break;
    }
  }
  res.K_hat = std::move(x);
  return res;
}

NormalizeResult apply_normalizer(const SymMatrix& K, const NormalizerSpec& spec) {
  NormalizeResult res;
  switch (spec.kind) {
    case NormalizerKind::none:
      res.K_hat = normalize_none(K);
      return res;
    case NormalizerKind::ratio_cut:
      res.K_hat = normalize_l1(K);
      return res;
    case NormalizerKind::sinkhorn:
      return normalize_sinkhorn(K, spec.tol, spec.max_iter);
    case NormalizerKind::frobenius_qp:
      return normalize_frobenius_qp(K, spec.tol, spec.max_iter);
    case NormalizerKind::ld_ssc1: {
      auto [f, rep] = ld_ssc1(K, spec.solver);
      res.K_hat = std::move(f);
      res.converged = rep.converged;
      res.iterations = rep.iterations;
      res.solver_report = std::move(rep);
      return res;
    }
    case NormalizerKind::ld_ssc2: {
      auto [f, rep] = ld_ssc2(K, spec.solver);
      res.K_hat = std::move(f);
      res.converged = rep.converged;
      res.iterations = rep.iterations;
      res.solver_report = std::move(rep);
      return res;
    }
  }
  throw std::logic_error("apply_normalizer: unknown kind");
}

}  // namespace ssc
