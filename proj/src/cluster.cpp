#include "ssc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ssc/random.hpp"

namespace ssc {

Embedding spectral_embed(const SymMatrix& K_hat, std::size_t k) {
  const std::size_t n = K_hat.size();
  if (k < 1 || k > n) throw std::invalid_argument("spectral_embed: k must lie in [1, n]");

  const EigenPair ep = eig(K_hat);
  Embedding e;
  e.n = n;
  e.k = k;
  e.coords.resize(n * k);
  e.eigenvalues.assign(ep.values.begin(), ep.values.begin() + static_cast<std::ptrdiff_t>(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) e.coords[i * k + j] = ep.vec(i, j);
  if (k < n && std::fabs(ep.values[k - 1] - ep.values[k]) <= 1e-10) e.degenerate = true;
  return e;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

struct LloydRun {
  std::vector<int> labels;
  double inertia = 0.0;
  std::vector<double> inertia_trace;
};

LloydRun lloyd_once(const std::vector<double>& x, std::size_t n, std::size_t d, std::size_t k,
                    Rng& rng) {
  // Seed centroids at k distinct points (partial Fisher-Yates).
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t t = 0; t < k; ++t)
    std::swap(idx[t], idx[t + rng.index(n - t)]);
  std::vector<double> centroids(k * d);
  for (std::size_t c = 0; c < k; ++c)
    std::copy_n(x.data() + idx[c] * d, d, centroids.data() + c * d);

  std::vector<int> assign(n, -1);
  std::vector<int> prev(n, -2);
  std::vector<std::size_t> counts(k);
  std::vector<double> run_trace;

  for (int iter = 0; iter < 300; ++iter) {
    double pass_inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int bc = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = sq_dist(x.data() + i * d, centroids.data() + c * d, d);
        if (dist < best) {
          best = dist;
          bc = static_cast<int>(c);
        }
      }
      assign[i] = bc;
      pass_inertia += best;
    }
    run_trace.push_back(pass_inertia);
    if (assign == prev) break;
    prev = assign;

    std::fill(centroids.begin(), centroids.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = static_cast<std::size_t>(assign[i]);
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) centroids[c * d + j] += x[i * d + j];
    }
    std::vector<char> taken(n, 0);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < d; ++j) centroids[c * d + j] /= static_cast<double>(counts[c]);
      } else {
        // Re-seed at the point farthest from its own centroid.
        double far_d = -1.0;
        std::size_t far_i = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (taken[i]) continue;
          const std::size_t ci = static_cast<std::size_t>(assign[i]);
          if (counts[ci] == 0) continue;
          const double dist = sq_dist(x.data() + i * d, centroids.data() + ci * d, d);
          if (dist > far_d) {
            far_d = dist;
            far_i = i;
          }
        }
        taken[far_i] = 1;
        std::copy_n(x.data() + far_i * d, d, centroids.data() + c * d);
      }
    }
  }

  LloydRun run;
  run.labels = std::move(assign);
  run.inertia_trace = std::move(run_trace);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = static_cast<std::size_t>(run.labels[i]);
    run.inertia += sq_dist(x.data() + i * d, centroids.data() + c * d, d);
  }
  return run;
}

}  // namespace

ClusterResult kmeans_points(const std::vector<double>& coords, std::size_t n, std::size_t dim,
                            std::size_t k, int restarts, std::uint64_t seed) {
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: k must lie in [1, n]");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");

  ClusterResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed + static_cast<std::uint64_t>(r));
    LloydRun run = lloyd_once(coords, n, dim, k, rng);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.labels = std::move(run.labels);
      best.inertia_trace = std::move(run.inertia_trace);
    }
  }
  best.restarts_used = restarts;
  return best;
}

ClusterResult kmeans(const Embedding& e, std::size_t k, int restarts, std::uint64_t seed) {
  return kmeans_points(e.coords, e.n, e.k, k, restarts, seed);
}

std::vector<int> hungarian_assignment(const std::vector<double>& cost, std::size_t k) {
  // Potentials-and-augmenting-paths formulation; O(k^3).
  const int n = static_cast<int>(k);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> col_of_row(k, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

double error_rate(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size())
    throw std::invalid_argument("error_rate: label vectors differ in length");
  const std::size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("error_rate: empty labels");

  int max_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || truth[i] < 0) throw std::invalid_argument("error_rate: negative label");
    max_id = std::max({max_id, labels[i], truth[i]});
  }
  const std::size_t k = static_cast<std::size_t>(max_id) + 1;

  std::vector<double> confusion(k * k, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    confusion[static_cast<std::size_t>(truth[i]) * k + static_cast<std::size_t>(labels[i])] += 1.0;

  std::vector<double> cost(k * k);
  for (std::size_t e = 0; e < k * k; ++e) cost[e] = -confusion[e];
  const std::vector<int> match = hungarian_assignment(cost, k);

  double matched = 0.0;
  for (std::size_t t = 0; t < k; ++t)
    if (match[t] >= 0) matched += confusion[t * k + static_cast<std::size_t>(match[t])];
  return 1.0 - matched / static_cast<double>(n);
}

PipelineResult run_pipeline(const Dataset& d, const KernelSpec& kspec, const NormalizerSpec& nspec,
                            std::size_t k, int restarts, std::uint64_t seed) {
  const SymMatrix K = build_affinity(d, kspec);
  NormalizeResult norm = apply_normalizer(K, nspec);

  PipelineResult res;
  res.normalizer_converged = norm.converged;
  res.solver_report = std::move(norm.solver_report);
  res.embedding = spectral_embed(norm.K_hat, k);
  res.clustering = kmeans(res.embedding, k, restarts, seed);
  if (d.has_labels()) res.error = error_rate(res.clustering.labels, d.labels);
  return res;
}

}  // namespace ssc
