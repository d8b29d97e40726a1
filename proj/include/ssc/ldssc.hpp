#pragma once

#include <utility>
#include <vector>

#include "ssc/boxqn.hpp"
#include "ssc/symmat.hpp"

// Nearest doubly-stochastic PSD approximation of an affinity matrix,
// solved through the Lagrange dual. Two solvers share the same dual:
// ld_ssc1 does block coordinate descent (quasi-Newton in u, closed forms
// for Z and Q); ld_ssc2 runs one bound-constrained quasi-Newton pass over
// (Q, u) jointly with Z eliminated.

namespace ssc {

struct SolverConfig {
  // The convergence test stops ld_ssc1 after a few dozen outer sweeps on
  // kernel-built affinities; the high cap only matters for adversarial
  // sign-indefinite inputs, where the alternation converges slowly.
  int outer_max = 3000;       // ld_ssc1 outer iteration cap
  int inner_evals = 10;       // ld_ssc1 per-outer quasi-Newton eval budget
  int max_evals = 500;        // ld_ssc2 eval cap
  double obj_rel_tol = 1e-7;  // relative dual-objective change at convergence
  double feas_tol = 1e-5;     // row-sum residual of the recovered primal
  double neg_tol = 1e-6;      // entrywise negativity residual
  bool init_q_identity = false;
  int qn_memory = 10;
  bool record_trace = true;
};

struct IterRecord {
  int iteration = 0;
  double dual_objective = 0.0;
  double primal_objective = 0.0;
  double duality_gap = 0.0;
  double feas_row = 0.0;  // max_i |(F 1)_i - 1|
  double feas_neg = 0.0;  // max(0, -min entry of F)
  double wall_s = 0.0;
};

struct SolverReport {
  std::vector<IterRecord> trace;
  double dual_objective = 0.0;
  double primal_objective = 0.0;
  double duality_gap = 0.0;
  double u_sum = 0.0;  // 1^T u at exit, for recomputing the dual value
  int iterations = 0;
  long evals = 0;  // dual-function evaluations (one eigendecomposition each)
  double wall_time_s = 0.0;
  bool converged = false;
};

/// Dual variables (Z PSD, Q entrywise nonnegative, u free) with the cached
/// P = -(Q + M + K), M = u 1^T + 1 u^T, and P's spectral split.
struct DualState {
  SymMatrix Z;
  SymMatrix Q;
  std::vector<double> u;

  SymMatrix P;
  SymMatrix Pneg;
  std::vector<double> pneg_row_sums;
  double pneg_fro_sq = 0.0;  // sum of squared negative eigenvalues of P
};

/// M = u 1^T + 1 u^T.
SymMatrix pair_sum_matrix(const std::vector<double>& u);

/// Builds a coherent state: caches P and its split. Q must be entrywise
/// nonnegative.
DualState make_dual_state(const SymMatrix& K, SymMatrix Z, SymMatrix Q, std::vector<double> u);

/// 1/2 ||Z + Q + M + K||_F^2 - 2 1^T u. With Z equal to P's positive part
/// this is the reduced dual objective 1/2 ||P-||_F^2 - 2 1^T u.
double dual_objective(const DualState& s, const SymMatrix& K);

/// Gradient of the reduced dual objective in u: -2 - 2 (row sums of P-).
std::vector<double> grad_u(const DualState& s);

/// Gradient of the reduced dual objective in Q: -P-.
SymMatrix grad_q(const DualState& s);

/// Closed-form Z subproblem minimizer: positive part of P.
SymMatrix solve_z(const DualState& s);

/// Closed-form Q subproblem minimizer: max(0, -(Z + M + K)).
SymMatrix solve_q(const SymMatrix& Z, const SymMatrix& M, const SymMatrix& K);

/// Primal recovery F = K + Q + M + Z; equals -P- when Z is P's positive part.
SymMatrix recover_primal(const DualState& s, const SymMatrix& K);

/// 1/2 ||K - F||_F^2.
double primal_objective(const SymMatrix& F, const SymMatrix& K);

std::pair<SymMatrix, SolverReport> ld_ssc1(const SymMatrix& K, const SolverConfig& cfg = {});
std::pair<SymMatrix, SolverReport> ld_ssc2(const SymMatrix& K, const SolverConfig& cfg = {});

}  // namespace ssc
