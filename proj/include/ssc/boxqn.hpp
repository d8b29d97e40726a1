#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ssc {

/// Limited-memory quasi-Newton minimizer with optional lower bounds:
/// gradient projection identifies the active set, an L-BFGS update runs on
/// the free variables, and a backtracking line search enforces sufficient
/// decrease. Lower bounds of -inf mean unconstrained coordinates.
struct BoxQNConfig {
  int memory = 10;
  double pg_tol = 1e-8;
  int max_evals = 500;
  double armijo_c = 1e-4;
  int max_line_evals = 40;
};

struct BoxQNReport {
  int iterations = 0;
  int evals = 0;
  double final_value = 0.0;
  double final_pg_norm = 0.0;
  bool converged = false;          // projected gradient dropped below pg_tol
  bool stopped_by_monitor = false;
  bool line_search_failed = false;
};

/// Evaluates f at x and writes the gradient in place; grad has x's size.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Called after each accepted step; returning true stops the solver.
using MonitorFn = std::function<bool(int iteration, std::span<const double> x, double value)>;

std::vector<double> minimize_box_qn(const ObjectiveFn& f, std::vector<double> x0,
                                    const std::vector<double>* lower_bounds,
                                    const BoxQNConfig& cfg, BoxQNReport* report = nullptr,
                                    const MonitorFn& monitor = {});

}  // namespace ssc
