#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssc/affinity.hpp"
#include "ssc/normalize.hpp"
#include "ssc/symmat.hpp"

namespace ssc {

/// Rows are points in the k-dimensional spectral subspace; columns are the
/// eigenvectors of the normalized affinity matrix for its k largest
/// eigenvalues.
struct Embedding {
  std::vector<double> coords;  // n-by-k row-major
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> eigenvalues;  // the k source eigenvalues, descending
  bool degenerate = false;          // eigenvalues k and k+1 coincide

  double at(std::size_t i, std::size_t j) const { return coords[i * k + j]; }
};

struct ClusterResult {
  std::vector<int> labels;
  double inertia = 0.0;
  int restarts_used = 0;
  std::vector<double> inertia_trace;  // per Lloyd iteration, winning restart
};

Embedding spectral_embed(const SymMatrix& K_hat, std::size_t k);

/// Lloyd iterations with seeded init (k distinct points sampled uniformly),
/// best-of-restarts by inertia. An emptied cluster is re-seeded at the
/// point farthest from its assigned centroid.
ClusterResult kmeans(const Embedding& e, std::size_t k, int restarts, std::uint64_t seed);

/// Same, on an arbitrary row-major point set.
ClusterResult kmeans_points(const std::vector<double>& coords, std::size_t n, std::size_t dim,
                            std::size_t k, int restarts, std::uint64_t seed);

/// 1 - (best matching between predicted clusters and truth classes)/n,
/// with the matching found by the Hungarian algorithm on the confusion
/// matrix.
double error_rate(const std::vector<int>& labels, const std::vector<int>& truth);

/// Min-cost assignment on a square cost matrix; returns col_of_row.
std::vector<int> hungarian_assignment(const std::vector<double>& cost, std::size_t k);

struct PipelineResult {
  ClusterResult clustering;
  std::optional<double> error;
  std::optional<SolverReport> solver_report;
  bool normalizer_converged = true;
  Embedding embedding;
};

/// build_affinity -> normalizer -> spectral_embed -> kmeans -> error_rate.
PipelineResult run_pipeline(const Dataset& d, const KernelSpec& kspec, const NormalizerSpec& nspec,
                            std::size_t k, int restarts, std::uint64_t seed);

}  // namespace ssc
