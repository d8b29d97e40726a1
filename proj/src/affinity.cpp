#include "ssc/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ssc/kernels.hpp"

namespace ssc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // Trim surrounding whitespace.
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

std::string kernel_kind_name(KernelSpec::Kind kind) {
  return kind == KernelSpec::Kind::gaussian ? "gaussian" : "polynomial";
}

std::optional<KernelSpec::Kind> parse_kernel_kind(const std::string& name) {
  if (name == "gaussian") return KernelSpec::Kind::gaussian;
  if (name == "polynomial") return KernelSpec::Kind::polynomial;
  return std::nullopt;
}

Dataset load_csv(const std::string& path, std::optional<LabelColumn> label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw std::runtime_error("load_csv: '" + path + "' has no rows");

  // Header detection: a header row has no numeric cells at all (data rows
  // always carry numeric features, even next to string labels).
  bool has_header = true;
  for (const auto& c : rows.front()) {
    double v;
    if (parse_number(c, v)) {
      has_header = false;
      break;
    }
  }
  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (has_header) {
    header = rows.front();
    first_data = 1;
  }
  if (first_data >= rows.size()) throw std::runtime_error("load_csv: no data rows in '" + path + "'");

  const std::size_t width = rows[first_data].size();
  std::optional<std::size_t> label_idx;
  if (label_column) {
    if (std::holds_alternative<int>(*label_column)) {
      const int idx = std::get<int>(*label_column);
      if (idx < 0 || static_cast<std::size_t>(idx) >= width)
        throw std::runtime_error("load_csv: label column index " + std::to_string(idx) +
                                 " out of range for width " + std::to_string(width));
      label_idx = static_cast<std::size_t>(idx);
    } else {
      const std::string& name = std::get<std::string>(*label_column);
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end())
        throw std::runtime_error("load_csv: no header column named '" + name + "'");
      label_idx = static_cast<std::size_t>(it - header.begin());
    }
  }

  Dataset d;
  d.name = path;
  d.n = rows.size() - first_data;
  d.dim = width - (label_idx ? 1 : 0);
  if (d.n < 2) throw std::runtime_error("load_csv: need at least 2 samples");
  if (d.dim < 1) throw std::runtime_error("load_csv: no feature columns");
  d.points.reserve(d.n * d.dim);

  std::map<std::string, int> class_ids;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t file_row = r + 1;  // 1-based, as in the file
    if (cells.size() != width)
      throw std::runtime_error("load_csv: ragged row " + std::to_string(file_row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      if (label_idx && c == *label_idx) continue;
      double v;
      if (!parse_number(cells[c], v))
        throw std::runtime_error("load_csv: non-numeric cell '" + cells[c] + "' at row " +
                                 std::to_string(file_row) + ", column " + std::to_string(c + 1));
      d.points.push_back(v);
    }
    if (label_idx) {
      const std::string& lab = cells[*label_idx];
      auto [it, inserted] = class_ids.emplace(lab, static_cast<int>(class_ids.size()));
      if (inserted) d.class_names.push_back(lab);
      d.labels.push_back(it->second);
    }
  }
  d.n_classes = class_ids.size();
  return d;
}

Dataset pca_reduce(const Dataset& d, std::size_t dims) {
  const std::size_t n = d.n;
  const std::size_t m = d.dim;
  if (dims < 1 || dims > std::min(n, m))
    throw std::invalid_argument("pca_reduce: dims must lie in [1, min(n, dim)]");

  // Mean-center.
  std::vector<double> xc(d.points);
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += xc[i * m + j];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) xc[i * m + j] -= mean;
  }

  Dataset out;
  out.n = n;
  out.dim = dims;
  out.labels = d.labels;
  out.n_classes = d.n_classes;
  out.class_names = d.class_names;
  out.name = d.name;
  out.points.assign(n * dims, 0.0);

  if (m <= n) {
    // Covariance route: top eigenvectors of X^T X.
    std::vector<double> cov(m * m);
    kernels::gram_cols(n, m, xc.data(), cov.data());
    SymMatrix c(m, std::move(cov));
    c *= 1.0 / static_cast<double>(n - 1);
    const EigenPair ep = eig(c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < dims; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += xc[i * m + j] * ep.vec(j, k);
        out.points[i * dims + k] = s;
      }
  } else {
    // Gram route for wide data: scores from the eigenpairs of X X^T.
    std::vector<double> gram(n * n);
    kernels::gram_rows(n, m, xc.data(), gram.data());
    const EigenPair ep = eig(SymMatrix(n, std::move(gram)));
    for (std::size_t k = 0; k < dims; ++k) {
      const double sigma = std::sqrt(std::max(0.0, ep.values[k]));
      for (std::size_t i = 0; i < n; ++i) out.points[i * dims + k] = ep.vec(i, k) * sigma;
    }
  }
  return out;
}

Dataset zscore(const Dataset& d) {
  Dataset out = d;
  for (std::size_t j = 0; j < d.dim; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) mean += d.at(i, j);
    mean /= static_cast<double>(d.n);
    double var = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      const double t = d.at(i, j) - mean;
      var += t * t;
    }
    var /= static_cast<double>(d.n);
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t i = 0; i < d.n; ++i) out.points[i * d.dim + j] = (d.at(i, j) - mean) * scale;
  }
  return out;
}

SymMatrix build_affinity(const Dataset& d, const KernelSpec& spec) {
  const std::size_t n = d.n;
  std::vector<double> buf(n * n);

  if (spec.kind == KernelSpec::Kind::gaussian) {
    if (!(spec.param > 0.0)) throw std::invalid_argument("build_affinity: gaussian width must be > 0");
    kernels::pairwise_sq_dists(n, d.dim, d.points.data(), buf.data());
    const double inv = 1.0 / (spec.param * spec.param);
    for (double& v : buf) v = std::exp(-v * inv);
    return SymMatrix(n, std::move(buf));
  }

  const double deg = spec.param;
  if (!(deg >= 1.0) || std::fabs(deg - std::round(deg)) > 1e-9)
    throw std::invalid_argument("build_affinity: polynomial degree must be an integer >= 1");
  kernels::gram_rows(n, d.dim, d.points.data(), buf.data());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = std::pow(buf[i * n + j] + 1.0, deg);
      if (!std::isfinite(v))
        throw std::runtime_error("build_affinity: polynomial kernel overflow at pair (" +
                                 std::to_string(i) + ", " + std::to_string(j) + ")");
      buf[i * n + j] = v;
    }
  return SymMatrix(n, std::move(buf));
}

SymMatrix knn_sparsify(const SymMatrix& K, std::size_t k_nn) {
  const std::size_t n = K.size();
  if (k_nn < 1 || k_nn >= n)
    throw std::invalid_argument("knn_sparsify: k_nn must lie in [1, n-1]");

  // keep[i*n+j]: j is among i's k_nn largest off-diagonal affinities
  // (ties resolved toward the lower column index).
  std::vector<char> keep(n * n, 0);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    idx.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) idx.push_back(j);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return K(i, a) > K(i, b); });
    for (std::size_t t = 0; t < k_nn; ++t) keep[i * n + idx[t]] = 1;
  }

  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, i, K(i, i));
    for (std::size_t j = i + 1; j < n; ++j)
      if (keep[i * n + j] || keep[j * n + i]) out.set(i, j, K(i, j));
  }
  return out;
}

double median_pairwise_distance(const Dataset& d) {
  const std::size_t n = d.n;
  std::vector<double> sq(n * n);
  kernels::pairwise_sq_dists(n, d.dim, d.points.data(), sq.data());
  std::vector<double> dists;
  dists.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dists.push_back(std::sqrt(sq[i * n + j]));
  if (dists.empty()) return 1.0;
  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
  return dists[mid];
}

}  // namespace ssc
