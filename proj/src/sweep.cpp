#include "ssc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "ssc/kernels.hpp"
#include "ssc/random.hpp"

namespace ssc {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int worker_count(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SSCLUST_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) hw = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::min<std::size_t>(hw, std::max<std::size_t>(jobs, 1)));
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit_report: cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_run_config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("load_run_config: invalid JSON in '" + path + "': " + e.what());
  }

  RunConfig cfg;
  const json& ds = j.at("dataset");
  cfg.dataset_path = ds.at("path").get<std::string>();
  if (ds.contains("label_column")) {
    const json& lc = ds["label_column"];
    if (lc.is_number_integer())
      cfg.label_column = LabelColumn(lc.get<int>());
    else
      cfg.label_column = LabelColumn(lc.get<std::string>());
  }
  cfg.dataset_name = ds.value("name", std::filesystem::path(cfg.dataset_path).stem().string());

  if (j.contains("pca_dims")) cfg.pca_dims = j["pca_dims"].get<std::size_t>();
  cfg.zscore_features = j.value("zscore", false);

  const json& kj = j.at("kernel");
  const auto kind = parse_kernel_kind(kj.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("load_run_config: unknown kernel kind");
  cfg.kernel_kind = *kind;
  if (kj.contains("params")) cfg.kernel_params = kj["params"].get<std::vector<double>>();

  for (const auto& name : j.at("normalizers").get<std::vector<std::string>>()) {
    const auto n = parse_normalizer(name);
    if (!n) throw std::runtime_error("load_run_config: unknown normalizer '" + name + "'");
    cfg.normalizers.push_back(*n);
  }
  if (cfg.normalizers.empty()) throw std::runtime_error("load_run_config: normalizers is empty");

  cfg.k = j.at("k").get<std::size_t>();
  cfg.restarts = j.value("restarts", 10);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.output_dir = j.value("output_dir", std::string("out"));

  if (j.contains("solver")) {
    const json& s = j["solver"];
    cfg.solver.outer_max = s.value("outer_max", cfg.solver.outer_max);
    cfg.solver.inner_evals = s.value("inner_evals", cfg.solver.inner_evals);
    cfg.solver.max_evals = s.value("max_evals", cfg.solver.max_evals);
    cfg.solver.obj_rel_tol = s.value("obj_rel_tol", cfg.solver.obj_rel_tol);
    cfg.solver.feas_tol = s.value("feas_tol", cfg.solver.feas_tol);
    cfg.solver.neg_tol = s.value("neg_tol", cfg.solver.neg_tol);
    cfg.solver.init_q_identity = s.value("init_q_identity", cfg.solver.init_q_identity);
    cfg.solver.qn_memory = s.value("qn_memory", cfg.solver.qn_memory);
  }
  if (j.contains("normalize")) {
    const json& nj = j["normalize"];
    cfg.norm_tol = nj.value("tol", cfg.norm_tol);
    cfg.norm_max_iter = nj.value("max_iter", cfg.norm_max_iter);
  }
  return cfg;
}

std::vector<double> default_kernel_grid(KernelSpec::Kind kind, const Dataset& d) {
  if (kind == KernelSpec::Kind::polynomial) return {1, 2, 3, 4, 5, 6};
  const double med = median_pairwise_distance(d);
  std::vector<double> grid;
  for (double f : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) grid.push_back(f * med);
  return grid;
}

SweepReport run_sweep(const RunConfig& cfg) {
  Dataset d = load_csv(cfg.dataset_path, cfg.label_column);
  d.name = cfg.dataset_name;
  if (cfg.zscore_features) d = zscore(d);
  if (cfg.pca_dims) d = pca_reduce(d, *cfg.pca_dims);

  SweepReport rep;
  rep.dataset = cfg.dataset_name;
  rep.seed = cfg.seed;
  rep.kernel_kind = cfg.kernel_kind;
  rep.kernel_params =
      cfg.kernel_params.empty() ? default_kernel_grid(cfg.kernel_kind, d) : cfg.kernel_params;
  if (rep.kernel_params.empty()) throw std::runtime_error("run_sweep: empty kernel grid");

  const std::size_t n_cells = cfg.normalizers.size() * rep.kernel_params.size();
  rep.cells.resize(n_cells);

  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_cells) return;
      const std::size_t ni = c / rep.kernel_params.size();
      const std::size_t pi = c % rep.kernel_params.size();

      SweepCell& cell = rep.cells[c];
      cell.normalizer = cfg.normalizers[ni];
      cell.kernel_param = rep.kernel_params[pi];
      const auto t0 = Clock::now();
      try {
        KernelSpec kspec{cfg.kernel_kind, cell.kernel_param};
        NormalizerSpec nspec;
        nspec.kind = cell.normalizer;
        nspec.tol = cfg.norm_tol;
        nspec.max_iter = cfg.norm_max_iter;
        nspec.solver = cfg.solver;
        PipelineResult pr = run_pipeline(d, kspec, nspec, cfg.k, cfg.restarts, cfg.seed);
        cell.error = pr.error;
        if (pr.solver_report) {
          cell.solver_iterations = pr.solver_report->iterations;
          cell.solver_evals = pr.solver_report->evals;
          cell.solver_converged = pr.solver_report->converged;
          cell.trace = std::move(pr.solver_report->trace);
        }
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.message = e.what();
      }
      cell.wall_s = seconds_since(t0);
    }
  };

  const int workers = worker_count(n_cells);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  rep.aggregates = recompute_aggregates(rep);
  return rep;
}

std::vector<NormalizerAggregate> recompute_aggregates(const SweepReport& rep) {
  std::vector<NormalizerAggregate> out;
  std::vector<NormalizerKind> kinds;
  for (const auto& c : rep.cells)
    if (std::find(kinds.begin(), kinds.end(), c.normalizer) == kinds.end())
      kinds.push_back(c.normalizer);
  for (NormalizerKind kind : kinds) {
    NormalizerAggregate agg;
    agg.normalizer = kind;
    double lo = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int count = 0;
    for (const auto& c : rep.cells) {
      if (c.normalizer != kind || !c.ok || !c.error) continue;
      lo = std::min(lo, *c.error);
      sum += *c.error;
      ++count;
    }
    if (count > 0) {
      agg.lowest_error = lo;
      agg.mean_error = sum / count;
    }
    out.push_back(agg);
  }
  return out;
}

namespace {

json cell_to_json(const SweepCell& c) {
  json j;
  j["type"] = "cell";
  j["normalizer"] = normalizer_name(c.normalizer);
  j["kernel_param"] = c.kernel_param;
  j["ok"] = c.ok;
  if (!c.message.empty()) j["message"] = c.message;
  if (c.error) j["error"] = *c.error;
  j["solver_iterations"] = c.solver_iterations;
  j["solver_evals"] = c.solver_evals;
  j["solver_converged"] = c.solver_converged;
  j["wall_s"] = c.wall_s;
  return j;
}

std::string trace_file_name(const SweepCell& c, std::size_t param_index) {
  return normalizer_name(c.normalizer) + "_p" + std::to_string(param_index) + ".csv";
}

}  // namespace

void emit_report(const SweepReport& rep, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);

  // Machine-readable results.
  std::ostringstream lines;
  {
    json meta;
    meta["type"] = "meta";
    meta["schema_version"] = rep.schema_version;
    meta["dataset"] = rep.dataset;
    meta["seed"] = rep.seed;
    meta["kernel_kind"] = kernel_kind_name(rep.kernel_kind);
    meta["kernel_params"] = rep.kernel_params;
    lines << meta.dump() << "\n";
  }
  for (const auto& c : rep.cells) lines << cell_to_json(c).dump() << "\n";
  for (const auto& a : rep.aggregates) {
    json j;
    j["type"] = "aggregate";
    j["normalizer"] = normalizer_name(a.normalizer);
    if (a.lowest_error) j["lowest_error"] = *a.lowest_error;
    if (a.mean_error) j["mean_error"] = *a.mean_error;
    lines << j.dump() << "\n";
  }
  atomic_write(root / "results.jsonl", lines.str());

  // Human-readable table: one row per normalizer, one column per grid point.
  std::ostringstream tab;
  tab << "dataset: " << rep.dataset << "   kernel: " << kernel_kind_name(rep.kernel_kind)
      << "   seed: " << rep.seed << "\n\n";
  tab << "normalizer";
  for (double p : rep.kernel_params) tab << "\t" << p;
  tab << "\tlowest\tmean\n";
  std::vector<NormalizerKind> kinds;
  for (const auto& c : rep.cells)
    if (std::find(kinds.begin(), kinds.end(), c.normalizer) == kinds.end())
      kinds.push_back(c.normalizer);
  for (NormalizerKind kind : kinds) {
    tab << normalizer_display_name(kind);
    for (double p : rep.kernel_params) {
      const auto it = std::find_if(rep.cells.begin(), rep.cells.end(), [&](const SweepCell& c) {
        return c.normalizer == kind && c.kernel_param == p;
      });
      if (it == rep.cells.end() || !it->ok)
        tab << "\tfail";
      else if (it->error)
        tab << "\t" << *it->error;
      else
        tab << "\t-";
    }
    const auto agg = std::find_if(rep.aggregates.begin(), rep.aggregates.end(),
                                  [&](const NormalizerAggregate& a) { return a.normalizer == kind; });
    if (agg != rep.aggregates.end() && agg->lowest_error)
      tab << "\t" << *agg->lowest_error << "\t" << *agg->mean_error << "\n";
    else
      tab << "\t-\t-\n";
  }
  atomic_write(root / "table.txt", tab.str());

  // Convergence traces for the dual-solver cells.
  bool any_trace = false;
  for (const auto& c : rep.cells)
    if (!c.trace.empty()) any_trace = true;
  if (any_trace) {
    fs::create_directories(root / "traces");
    for (std::size_t ci = 0; ci < rep.cells.size(); ++ci) {
      const SweepCell& c = rep.cells[ci];
      if (c.trace.empty()) continue;
      const std::size_t pi = ci % rep.kernel_params.size();
      std::ostringstream csv;
      csv << "iteration,dual_objective,primal_objective,duality_gap,feas_row,feas_neg,wall_s\n";
      csv.precision(17);
      for (const auto& r : c.trace)
        csv << r.iteration << "," << r.dual_objective << "," << r.primal_objective << ","
            << r.duality_gap << "," << r.feas_row << "," << r.feas_neg << "," << r.wall_s << "\n";
      atomic_write(root / "traces" / trace_file_name(c, pi), csv.str());
    }
  }
}

SweepReport parse_results(const std::string& results_path) {
  std::ifstream in(results_path);
  if (!in) throw std::runtime_error("parse_results: cannot open '" + results_path + "'");

  SweepReport rep;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "meta") {
      rep.schema_version = j.at("schema_version").get<int>();
      rep.dataset = j.at("dataset").get<std::string>();
      rep.seed = j.at("seed").get<std::uint64_t>();
      const auto kind = parse_kernel_kind(j.at("kernel_kind").get<std::string>());
      if (!kind) throw std::runtime_error("parse_results: unknown kernel kind");
      rep.kernel_kind = *kind;
      rep.kernel_params = j.at("kernel_params").get<std::vector<double>>();
    } else if (type == "cell") {
      SweepCell c;
      const auto norm = parse_normalizer(j.at("normalizer").get<std::string>());
      if (!norm) throw std::runtime_error("parse_results: unknown normalizer");
      c.normalizer = *norm;
      c.kernel_param = j.at("kernel_param").get<double>();
      c.ok = j.at("ok").get<bool>();
      if (j.contains("message")) c.message = j["message"].get<std::string>();
      if (j.contains("error")) c.error = j["error"].get<double>();
      c.solver_iterations = j.at("solver_iterations").get<long>();
      c.solver_evals = j.at("solver_evals").get<long>();
      c.solver_converged = j.at("solver_converged").get<bool>();
      c.wall_s = j.at("wall_s").get<double>();
      rep.cells.push_back(std::move(c));
    } else if (type == "aggregate") {
      NormalizerAggregate a;
      const auto norm = parse_normalizer(j.at("normalizer").get<std::string>());
      if (!norm) throw std::runtime_error("parse_results: unknown normalizer");
      a.normalizer = *norm;
      if (j.contains("lowest_error")) a.lowest_error = j["lowest_error"].get<double>();
      if (j.contains("mean_error")) a.mean_error = j["mean_error"].get<double>();
      rep.aggregates.push_back(a);
    }
  }
  return rep;
}

Dataset two_gaussians(std::size_t n, std::uint64_t seed, double separation, double spread,
                      std::size_t dim) {
  Dataset d;
  d.n = n;
  d.dim = dim;
  d.name = "two_gaussians";
  d.points.resize(n * dim);
  d.labels.resize(n);
  d.n_classes = 2;
  Rng rng(seed);
  const double shift = separation / std::sqrt(static_cast<double>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    const bool second = i >= n / 2;
    d.labels[i] = second ? 1 : 0;
    for (std::size_t j = 0; j < dim; ++j)
      d.points[i * dim + j] = (second ? shift : 0.0) + spread * rng.normal();
  }
  return d;
}

std::vector<BenchRow> timing_bench(const std::vector<std::size_t>& sizes, int trials, bool run_ld1,
                                   bool run_ld2, std::uint64_t seed) {
  if (sizes.size() < 2) throw std::invalid_argument("timing_bench: need at least 2 sizes");
  if (trials < 1) throw std::invalid_argument("timing_bench: trials must be >= 1");

  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    const Dataset d = two_gaussians(n, seed);
    const SymMatrix K = build_affinity(d, KernelSpec{KernelSpec::Kind::gaussian, 3.0});
    BenchRow row;
    row.n = n;
    std::vector<double> t1, t2;
    for (int t = 0; t < trials; ++t) {
      if (run_ld1) {
        const auto t0 = Clock::now();
        const auto [f, r] = ld_ssc1(K);
        t1.push_back(seconds_since(t0));
        row.ld1_evals = r.evals;
        (void)f;
      }
      if (run_ld2) {
        const auto t0 = Clock::now();
        const auto [f, r] = ld_ssc2(K);
        t2.push_back(seconds_since(t0));
        row.ld2_evals = r.evals;
        (void)f;
      }
    }
    row.ld1_median_s = median(t1);
    row.ld2_median_s = median(t2);
    rows.push_back(row);
  }
  return rows;
}

std::vector<KernelBenchRow> kernel_bench(const std::vector<std::size_t>& sizes, int trials) {
  std::vector<KernelBenchRow> rows;
  Rng rng(123);
  for (std::size_t n : sizes) {
    std::vector<double> v(n * n);
    std::vector<double> w(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
    std::vector<double> out(n * n);

    const auto time_it = [&](auto&& fn) {
      std::vector<double> times;
      for (int t = 0; t < trials; ++t) {
        const auto t0 = Clock::now();
        fn();
        times.push_back(seconds_since(t0));
      }
      return median(times);
    };

    KernelBenchRow wg;
    wg.kernel = "weighted_gram";
    wg.n = n;
    wg.serial_s = time_it([&] { kernels::weighted_gram_serial(n, n, v.data(), w.data(), out.data()); });
    wg.parallel_s =
        time_it([&] { kernels::weighted_gram_parallel(n, n, v.data(), w.data(), out.data()); });
    rows.push_back(wg);

    const std::size_t dim = 16;
    std::vector<double> pts(n * dim);
    for (double& x : pts) x = rng.uniform(-1.0, 1.0);
    KernelBenchRow pd;
    pd.kernel = "pairwise_sq_dists";
    pd.n = n;
    pd.serial_s =
        time_it([&] { kernels::pairwise_sq_dists_serial(n, dim, pts.data(), out.data()); });
    pd.parallel_s =
        time_it([&] { kernels::pairwise_sq_dists_parallel(n, dim, pts.data(), out.data()); });
    rows.push_back(pd);
  }
  return rows;
}

}  // namespace ssc
