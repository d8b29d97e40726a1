#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssc/cluster.hpp"

// Batch front end: config-driven kernel-parameter sweeps over a set of
// normalizers, report files, and the timing benchmarks.

namespace ssc {

struct RunConfig {
  std::string dataset_path;
  std::optional<LabelColumn> label_column;
  std::string dataset_name;
  std::optional<std::size_t> pca_dims;
  bool zscore_features = false;
  KernelSpec::Kind kernel_kind = KernelSpec::Kind::gaussian;
  std::vector<double> kernel_params;  // empty -> default grid
  std::vector<NormalizerKind> normalizers;
  std::size_t k = 2;
  int restarts = 10;
  std::uint64_t seed = 0;
  SolverConfig solver;
  double norm_tol = 1e-7;
  int norm_max_iter = 10000;
  std::string output_dir = "out";
};

/// Parses the JSON config documented in the README. Throws with the field
/// name on schema violations.
RunConfig load_run_config(const std::string& path);

/// Default grids: gaussian widths {0.1,0.2,0.5,1,2,5,10} x median pairwise
/// distance; polynomial degrees 1..6.
std::vector<double> default_kernel_grid(KernelSpec::Kind kind, const Dataset& d);

struct SweepCell {
  NormalizerKind normalizer = NormalizerKind::none;
  double kernel_param = 0.0;
  bool ok = false;
  std::string message;
  std::optional<double> error;
  long solver_iterations = 0;
  long solver_evals = 0;
  bool solver_converged = true;
  double wall_s = 0.0;
  std::vector<IterRecord> trace;  // ld_ssc cells only
};

struct NormalizerAggregate {
  NormalizerKind normalizer = NormalizerKind::none;
  std::optional<double> lowest_error;
  std::optional<double> mean_error;
};

struct SweepReport {
  int schema_version = 1;
  std::string dataset;
  std::uint64_t seed = 0;
  KernelSpec::Kind kernel_kind = KernelSpec::Kind::gaussian;
  std::vector<double> kernel_params;
  std::vector<SweepCell> cells;  // normalizer-major, then grid order
  std::vector<NormalizerAggregate> aggregates;
};

/// Runs every (normalizer, kernel parameter) cell with the shared seed.
/// Cells run on a worker pool capped by SSCLUST_WORKERS; a failing cell is
/// recorded and does not abort the rest.
SweepReport run_sweep(const RunConfig& cfg);

/// Writes results.jsonl, table.txt and per-cell convergence traces under
/// dir (atomically, via temp files).
void emit_report(const SweepReport& rep, const std::string& dir);

/// Reads a results.jsonl back; traces are not round-tripped.
SweepReport parse_results(const std::string& results_path);

/// Recompute the per-normalizer aggregates from the cells.
std::vector<NormalizerAggregate> recompute_aggregates(const SweepReport& rep);

/// Two spherical Gaussian clusters at the given center separation.
Dataset two_gaussians(std::size_t n, std::uint64_t seed, double separation = 10.0,
                      double spread = 0.5, std::size_t dim = 2);

struct BenchRow {
  std::size_t n = 0;
  double ld1_median_s = 0.0;
  double ld2_median_s = 0.0;
  long ld1_evals = 0;
  long ld2_evals = 0;
};

/// Solver wall time on synthetic two-Gaussian data, median over trials.
std::vector<BenchRow> timing_bench(const std::vector<std::size_t>& sizes, int trials,
                                   bool run_ld1 = true, bool run_ld2 = true,
                                   std::uint64_t seed = 42);

struct KernelBenchRow {
  std::string kernel;
  std::size_t n = 0;
  double serial_s = 0.0;
  double parallel_s = 0.0;
};

/// Serial reference vs OpenMP variants of the dense kernels.
std::vector<KernelBenchRow> kernel_bench(const std::vector<std::size_t>& sizes, int trials);

}  // namespace ssc
