#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ssc/symmat.hpp"

namespace ssc {

/// Row-major n-by-dim feature matrix with optional ground-truth labels in
/// [0, n_classes).
struct Dataset {
  std::vector<double> points;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<int> labels;  // empty when no ground truth
  std::size_t n_classes = 0;
  std::vector<std::string> class_names;
  std::string name;

  double at(std::size_t i, std::size_t j) const { return points[i * dim + j]; }
  bool has_labels() const { return !labels.empty(); }
};

struct KernelSpec {
  enum class Kind { gaussian, polynomial };
  Kind kind = Kind::gaussian;
  double param = 1.0;  // gaussian width delta, or polynomial degree d
};

std::string kernel_kind_name(KernelSpec::Kind kind);
std::optional<KernelSpec::Kind> parse_kernel_kind(const std::string& name);

/// Label column chosen by 0-based index or by header name.
using LabelColumn = std::variant<int, std::string>;

/// Comma-separated UTF-8 file, one sample per row; a non-numeric first row
/// is treated as a header. Ragged rows, non-numeric feature cells and a
/// missing file are rejected with row/column diagnostics.
Dataset load_csv(const std::string& path, std::optional<LabelColumn> label_column = std::nullopt);

/// Projects mean-centered data onto the top principal axes. Uses the Gram
/// matrix route when the feature count exceeds the sample count.
Dataset pca_reduce(const Dataset& d, std::size_t dims);

/// Standardize each feature to zero mean and unit variance (constant
/// features are left centered).
Dataset zscore(const Dataset& d);

/// K_ij = exp(-||a_i - a_j||^2 / delta^2) or K_ij = (a_i . a_j + 1)^d.
SymMatrix build_affinity(const Dataset& d, const KernelSpec& spec);

/// Keeps entry (i,j) iff j is among i's k_nn largest off-diagonal
/// affinities or vice versa; the diagonal always stays.
SymMatrix knn_sparsify(const SymMatrix& K, std::size_t k_nn);

/// Median of the n(n-1)/2 pairwise Euclidean distances.
double median_pairwise_distance(const Dataset& d);

}  // namespace ssc
