// ssclust: batch front end for semidefinite spectral clustering.
//
//   ssclust run    --config cfg.json [--seed N] [--out DIR]
//   ssclust bench  --sizes 50,100,200,400 [--trials 3] [--no-ld1] [--kernels]
//   ssclust verify [--n 10] [--instances 25] [--tol 1e-4] [--seed 7]

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssc/ldssc.hpp"
#include "ssc/oracle.hpp"
#include "ssc/random.hpp"
#include "ssc/sweep.hpp"

namespace {

int cmd_run(const std::string& config_path, std::uint64_t* seed_override,
            const std::string* out_override) {
  ssc::RunConfig cfg = ssc::load_run_config(config_path);
  if (seed_override) cfg.seed = *seed_override;
  if (out_override) cfg.output_dir = *out_override;

  const ssc::SweepReport rep = ssc::run_sweep(cfg);
  ssc::emit_report(rep, cfg.output_dir);

  std::printf("dataset %s: %zu cells -> %s\n", rep.dataset.c_str(), rep.cells.size(),
              cfg.output_dir.c_str());
  for (const auto& a : rep.aggregates) {
    if (a.lowest_error)
      std::printf("  %-8s lowest %.4f  mean %.4f\n",
                  ssc::normalizer_display_name(a.normalizer).c_str(), *a.lowest_error,
                  *a.mean_error);
    else
      std::printf("  %-8s (no error rates)\n", ssc::normalizer_display_name(a.normalizer).c_str());
  }
  bool all_ok = true;
  for (const auto& c : rep.cells)
    if (!c.ok) {
      all_ok = false;
      std::printf("  FAILED cell %s @ %g: %s\n", ssc::normalizer_name(c.normalizer).c_str(),
                  c.kernel_param, c.message.c_str());
    }
  return all_ok ? 0 : 1;
}

int cmd_bench(const std::vector<std::size_t>& sizes, int trials, bool run_ld1, bool kernels_mode) {
  if (kernels_mode) {
    std::printf("%-20s %8s %12s %12s %9s\n", "kernel", "n", "serial_s", "parallel_s", "speedup");
    for (const auto& r : ssc::kernel_bench(sizes, trials))
      std::printf("%-20s %8zu %12.6f %12.6f %8.2fx\n", r.kernel.c_str(), r.n, r.serial_s,
                  r.parallel_s, r.parallel_s > 0 ? r.serial_s / r.parallel_s : 0.0);
    return 0;
  }

  const auto rows = ssc::timing_bench(sizes, trials, run_ld1, true);
  std::printf("%8s %14s %14s %12s %12s\n", "n", "ld_ssc1_s", "ld_ssc2_s", "ld1_evals", "ld2_evals");
  for (const auto& r : rows) {
    if (run_ld1)
      std::printf("%8zu %14.3f %14.3f %12ld %12ld\n", r.n, r.ld1_median_s, r.ld2_median_s,
                  r.ld1_evals, r.ld2_evals);
    else
      std::printf("%8zu %14s %14.3f %12s %12ld\n", r.n, "-", r.ld2_median_s, "-", r.ld2_evals);
  }
  return 0;
}

int cmd_verify(std::size_t n, int instances, double tol, std::uint64_t seed) {
  int failures = 0;
  const auto check = [&](bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
  };

  for (int inst = 0; inst < instances; ++inst) {
    ssc::Rng rng(seed + static_cast<std::uint64_t>(inst));
    ssc::SymMatrix K(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) K.set(i, j, rng.uniform(-1.0, 1.0));

    const auto dyk = ssc::oracle::dykstra_project(
        K, {ssc::oracle::SetId::affine, ssc::oracle::SetId::nonneg, ssc::oracle::SetId::psd});
    const auto [f1, r1] = ssc::ld_ssc1(K);
    const auto [f2, r2] = ssc::ld_ssc2(K);

    const double d1 = ssc::fro_norm(f1 - dyk.F);
    const double d2 = ssc::fro_norm(f2 - dyk.F);
    const double gap_tol = 1e-5 * std::max(1.0, ssc::fro_norm_sq(K));
    char buf[160];
    std::snprintf(buf, sizeof buf, "instance %d: |F1-F*|=%.2e |F2-F*|=%.2e gap1=%.2e gap2=%.2e",
                  inst, d1, d2, r1.duality_gap, r2.duality_gap);
    check(d1 <= tol && d2 <= tol && std::fabs(r1.duality_gap) <= gap_tol &&
              std::fabs(r2.duality_gap) <= gap_tol,
          buf);
  }
  std::printf("%s (%d/%d instances ok)\n", failures == 0 ? "VERIFY PASSED" : "VERIFY FAILED",
              instances - failures, instances);
  return failures == 0 ? 0 : 1;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    sizes.push_back(static_cast<std::size_t>(std::stoul(csv.substr(pos, next - pos))));
    pos = next + 1;
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semidefinite spectral clustering driver"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute a sweep described by a JSON config");
  std::string config_path;
  run->add_option("--config", config_path, "config file path")->required();
  std::uint64_t seed_override = 0;
  auto* seed_opt = run->add_option("--seed", seed_override, "override the config seed");
  std::string out_override;
  auto* out_opt = run->add_option("--out", out_override, "override the output directory");

  auto* bench = app.add_subcommand("bench", "solver scaling / kernel benchmarks");
  std::string sizes_csv = "50,100,200,400";
  bench->add_option("--sizes", sizes_csv, "comma-separated sample counts");
  int trials = 3;
  bench->add_option("--trials", trials, "trials per size (median reported)");
  bool no_ld1 = false;
  bench->add_flag("--no-ld1", no_ld1, "skip ld_ssc1 (it is the slow one)");
  bool kernels_mode = false;
  bench->add_flag("--kernels", kernels_mode, "compare serial vs OpenMP kernels instead");

  auto* verify = app.add_subcommand("verify", "cross-check the solvers against the Dykstra oracle");
  std::size_t vn = 10;
  verify->add_option("--n", vn, "matrix dimension");
  int instances = 25;
  verify->add_option("--instances", instances, "number of random instances");
  double tol = 1e-4;
  verify->add_option("--tol", tol, "Frobenius agreement tolerance");
  std::uint64_t vseed = 7;
  verify->add_option("--seed", vseed, "base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed_opt->count() ? &seed_override : nullptr,
                     out_opt->count() ? &out_override : nullptr);
    if (bench->parsed()) return cmd_bench(parse_sizes(sizes_csv), trials, !no_ld1, kernels_mode);
    if (verify->parsed()) return cmd_verify(vn, instances, tol, vseed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
