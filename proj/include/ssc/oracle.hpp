#pragma once

#include <vector>

#include "ssc/symmat.hpp"

// Independent ground-truth projector used by the test suites: Dykstra's
// alternating projections onto any subset of {affine doubly-stochastic set,
// nonnegative orthant, PSD cone}. Correct over fast; never on the
// clustering path.

namespace ssc::oracle {

enum class SetId { affine, nonneg, psd };

/// Exact Frobenius projection onto {F : F 1 = 1, F = F^T}.
SymMatrix project_affine_ds(const SymMatrix& x);

/// Entrywise max(0, x).
SymMatrix project_nonneg(const SymMatrix& x);

/// Frobenius projection onto the PSD cone (the spectral positive part).
SymMatrix project_psd(const SymMatrix& x);

struct DykstraResult {
  SymMatrix F;
  int cycles = 0;
  bool converged = false;
  double movement = 0.0;                // Frobenius change over the last cycle
  std::vector<double> cycle_distances;  // ||x_cycle - K||_F per cycle
};

/// Projection of K onto the intersection of the selected sets.
DykstraResult dykstra_project(const SymMatrix& K, const std::vector<SetId>& sets,
                              double tol = 1e-9, int max_cycles = 50000);

}  // namespace ssc::oracle
