#pragma once

#include <optional>
#include <string>

#include "ssc/ldssc.hpp"
#include "ssc/symmat.hpp"

// Affinity-matrix normalizers: identity (NO), the L1 closed form behind
// Ratio-cut (RC), the iterative relative-entropy scaling behind
// Normalized-cut (NC), the Frobenius projection without the PSD constraint
// (FSC), and the two dual solvers.

namespace ssc {

enum class NormalizerKind { none, ratio_cut, sinkhorn, frobenius_qp, ld_ssc1, ld_ssc2 };

std::string normalizer_name(NormalizerKind kind);        // config-file spelling
std::string normalizer_display_name(NormalizerKind kind);  // table spelling (NO, RC, ...)
std::optional<NormalizerKind> parse_normalizer(const std::string& name);

struct NormalizerSpec {
  NormalizerKind kind = NormalizerKind::none;
  double tol = 1e-7;
  int max_iter = 10000;
  SolverConfig solver;  // used by the ld_ssc kinds
};

struct NormalizeResult {
  SymMatrix K_hat;
  bool converged = true;
  int iterations = 0;
  bool residual_monotone = true;  // sinkhorn: max row-sum deviation never grew
  std::optional<SolverReport> solver_report;
};

/// Returns K unchanged.
SymMatrix normalize_none(const SymMatrix& K);

/// K - diag(K 1) + I. Row sums are exactly 1; entries may be negative.
SymMatrix normalize_l1(const SymMatrix& K);

/// Symmetric scaling K <- D^{-1/2} K D^{-1/2} iterated to the doubly
/// stochastic limit. Requires nonnegative entries and no zero row.
NormalizeResult normalize_sinkhorn(const SymMatrix& K, double tol = 1e-7, int max_iter = 10000);

/// Frobenius projection onto {F >= 0, F 1 = 1, F = F^T} via Dykstra's
/// alternating projections between the affine set and the orthant.
NormalizeResult normalize_frobenius_qp(const SymMatrix& K, double tol = 1e-7, int max_iter = 10000);

/// Dispatch on the spec, including the ld_ssc kinds.
NormalizeResult apply_normalizer(const SymMatrix& K, const NormalizerSpec& spec);

}  // namespace ssc
