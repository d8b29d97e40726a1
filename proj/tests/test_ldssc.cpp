#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "ssc/ldssc.hpp"
#include "ssc/oracle.hpp"
#include "ssc/random.hpp"

using namespace ssc;

namespace {

// Naive second code path for the reduced dual objective of the joint
// (Q, u) problem: build P entry by entry, eigendecompose, sum squares of
// the negative eigenvalues.
double reduced_obj_naive(const SymMatrix& K, const SymMatrix& Q, const std::vector<double>& u) {
  const std::size_t n = K.size();
  SymMatrix P(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      P.data()[i * n + j] = -(Q(i, j) + u[i] + u[j] + K(i, j));
  double s = 0.0;
  for (double l : eig(P).values)
    if (l < 0.0) s += l * l;
  double su = 0.0;
  for (double v : u) su += v;
  return 0.5 * s - 2.0 * su;
}

// Naive evaluation of the full dual objective from (Z, Q, u, K) directly.
double dual_obj_naive(const SymMatrix& K, const SymMatrix& Z, const SymMatrix& Q,
                      const std::vector<double>& u) {
  const std::size_t n = K.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = Z(i, j) + Q(i, j) + u[i] + u[j] + K(i, j);
      s += a * a;
    }
  double su = 0.0;
  for (double v : u) su += v;
  return 0.5 * s - 2.0 * su;
}

struct RandomState {
  SymMatrix K;
  SymMatrix Q;
  std::vector<double> u;
};

RandomState random_state(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  RandomState st{SymMatrix(n), SymMatrix(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      st.K.set(i, j, rng.uniform(-1.0, 1.0));
      st.Q.set(i, j, rng.uniform(0.0, 1.0));
    }
  for (double& v : st.u) v = rng.uniform(-0.5, 0.5);
  return st;
}

double min_abs_eig_of_p(const RandomState& st) {
  const DualState ds = make_dual_state(st.K, SymMatrix(st.K.size()), st.Q, st.u);
  double m = std::numeric_limits<double>::infinity();
  for (double l : eig(ds.P).values) m = std::min(m, std::fabs(l));
  return m;
}

SymMatrix flat_ds(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, 1.0 / static_cast<double>(n));
  return m;
}

// Exhaustive oracle for n = 2: the doubly stochastic PSD matrices are
// F(a) = [[a, 1-a], [1-a, a]] with a in [1/2, 1]; grid plus refinement.
SymMatrix best_2x2(const SymMatrix& K) {
  const auto dist_sq = [&](double a) {
    const double d0 = K(0, 0) - a;
    const double d1 = K(1, 1) - a;
    const double off = K(0, 1) - (1.0 - a);
    return d0 * d0 + d1 * d1 + 2.0 * off * off;
  };
  double best_a = 0.5;
  double best = dist_sq(best_a);
  double lo = 0.5, hi = 1.0, step = 1e-3;
  for (int round = 0; round < 4; ++round) {
    for (double a = lo; a <= hi + 1e-15; a += step) {
      const double v = dist_sq(a);
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    lo = std::max(0.5, best_a - step);
    hi = std::min(1.0, best_a + step);
    step *= 1e-2;
  }
  return SymMatrix{{best_a, 1.0 - best_a}, {1.0 - best_a, best_a}};
}

}  // namespace

TEST_CASE("dual_objective: plug-in examples and naive oracle") {
  const std::size_t n = 4;
  const SymMatrix K = test::random_sym(n, 1);
  const DualState zero = make_dual_state(K, SymMatrix(n), SymMatrix(n), std::vector<double>(n, 0.0));
  CHECK(dual_objective(zero, K) == doctest::Approx(0.5 * fro_norm_sq(K)));

  const SymMatrix K0(n);
  const DualState all0 = make_dual_state(K0, SymMatrix(n), SymMatrix(n), std::vector<double>(n, 0.0));
  CHECK(dual_objective(all0, K0) == doctest::Approx(0.0));

  for (std::uint64_t seed = 2; seed < 8; ++seed) {
    const RandomState st = random_state(5, seed);
    const SymMatrix Z = test::random_psd(5, seed * 7);
    const DualState ds = make_dual_state(st.K, Z, st.Q, st.u);
    CHECK(dual_objective(ds, st.K) ==
          doctest::Approx(dual_obj_naive(st.K, Z, st.Q, st.u)).epsilon(1e-10));
  }
}

TEST_CASE("dual_objective with Z = P+ equals the reduced objective") {
  const RandomState st = random_state(6, 99);
  DualState ds = make_dual_state(st.K, SymMatrix(6), st.Q, st.u);
  ds.Z = solve_z(ds);
  CHECK(dual_objective(ds, st.K) ==
        doctest::Approx(reduced_obj_naive(st.K, st.Q, st.u)).epsilon(1e-9));
}

TEST_CASE("dual_objective rejects a stale cache") {
  const SymMatrix K = test::random_sym(3, 5);
  DualState ds = make_dual_state(K, SymMatrix(3), SymMatrix(3), std::vector<double>(3, 0.0));
  ds.u[0] += 1.0;  // break coherence
  CHECK_THROWS_AS(dual_objective(ds, K), std::logic_error);
}

TEST_CASE("grad_u: PSD P gives constant -2; hand case; finite differences") {
  // P = -K PSD when K is NSD.
  const SymMatrix Kneg = -1.0 * test::random_psd(5, 3);
  const DualState ds =
      make_dual_state(Kneg, SymMatrix(5), SymMatrix(5), std::vector<double>(5, 0.0));
  for (double g : grad_u(ds)) CHECK(g == doctest::Approx(-2.0));

  // P = diag(-1, 0): row sums of P- are (-1, 0), so g = (0, -2).
  const SymMatrix Kd = SymMatrix{{1.0, 0.0}, {0.0, 0.0}};
  const DualState ds2 = make_dual_state(Kd, SymMatrix(2), SymMatrix(2), std::vector<double>(2, 0.0));
  const std::vector<double> g2 = grad_u(ds2);
  CHECK(g2[0] == doctest::Approx(0.0));
  CHECK(g2[1] == doctest::Approx(-2.0));

  // Central differences of the reduced objective, >= 20 accepted states.
  int accepted = 0;
  for (std::uint64_t seed = 0; accepted < 20 && seed < 200; ++seed) {
    const RandomState st = random_state(6, 600 + seed);
    if (min_abs_eig_of_p(st) < 1e-6) continue;
    ++accepted;
    const DualState ds3 = make_dual_state(st.K, SymMatrix(6), st.Q, st.u);
    const std::vector<double> g = grad_u(ds3);
    for (std::size_t i = 0; i < 6; ++i) {
      const double h = 1e-6 * (1.0 + std::fabs(st.u[i]));
      std::vector<double> up = st.u, dn = st.u;
      up[i] += h;
      dn[i] -= h;
      const double fd =
          (reduced_obj_naive(st.K, st.Q, up) - reduced_obj_naive(st.K, st.Q, dn)) / (2.0 * h);
      CHECK(std::fabs(g[i] - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
    }
  }
  CHECK(accepted >= 20);
}

TEST_CASE("grad_q: zero on PSD P; hand case; symmetric-direction differences") {
  const SymMatrix Kneg = -1.0 * test::random_psd(4, 9);
  const DualState ds =
      make_dual_state(Kneg, SymMatrix(4), SymMatrix(4), std::vector<double>(4, 0.0));
  CHECK(grad_q(ds).max_abs() <= 1e-10);

  // P = diag(-2, 3) -> g(Q) = -P- = diag(2, 0).
  const SymMatrix Kd = SymMatrix{{2.0, 0.0}, {0.0, -3.0}};
  const DualState ds2 = make_dual_state(Kd, SymMatrix(2), SymMatrix(2), std::vector<double>(2, 0.0));
  const SymMatrix g2 = grad_q(ds2);
  CHECK(g2(0, 0) == doctest::Approx(2.0));
  CHECK(g2(1, 1) == doctest::Approx(0.0));
  CHECK(g2(0, 1) == doctest::Approx(0.0));

  int accepted = 0;
  for (std::uint64_t seed = 0; accepted < 20 && seed < 200; ++seed) {
    const std::size_t n = 5;
    const RandomState st = random_state(n, 900 + seed);
    if (min_abs_eig_of_p(st) < 1e-6) continue;
    ++accepted;
    const DualState ds3 = make_dual_state(st.K, SymMatrix(n), st.Q, st.u);
    const SymMatrix g = grad_q(ds3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        // Directional derivative along the symmetric basis direction.
        const double h = 1e-6;
        SymMatrix up = st.Q, dn = st.Q;
        up.set(i, j, st.Q(i, j) + h);
        dn.set(i, j, st.Q(i, j) - h);
        const double fd =
            (reduced_obj_naive(st.K, up, st.u) - reduced_obj_naive(st.K, dn, st.u)) / (2.0 * h);
        const double expect = (i == j) ? g(i, i) : 2.0 * g(i, j);
        CHECK(std::fabs(expect - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
      }
  }
  CHECK(accepted >= 20);
}

TEST_CASE("solve_z: PSD fixed point, NSD zero, perturbation optimality") {
  const SymMatrix Kneg = -1.0 * test::random_psd(5, 17);  // P = -K PSD
  const DualState a = make_dual_state(Kneg, SymMatrix(5), SymMatrix(5), std::vector<double>(5, 0.0));
  CHECK(test::max_abs_diff(solve_z(a), a.P) <= 1e-9);

  const SymMatrix Kpos = test::random_psd(5, 18);  // P = -K NSD
  const DualState b = make_dual_state(Kpos, SymMatrix(5), SymMatrix(5), std::vector<double>(5, 0.0));
  CHECK(solve_z(b).max_abs() <= 1e-9);

  const RandomState st = random_state(6, 19);
  const DualState c = make_dual_state(st.K, SymMatrix(6), st.Q, st.u);
  const SymMatrix z = solve_z(c);
  const double base = fro_norm(z - c.P);
  for (std::uint64_t s = 0; s < 6; ++s) {
    const SymMatrix e = test::random_sym(6, 777 + s);
    for (double eps : {0.3, 0.03}) {
      const SymMatrix cand = positive_part(z + eps * e);  // PSD candidate near z
      CHECK(base <= fro_norm(cand - c.P) + 1e-10);
    }
  }
}

TEST_CASE("solve_q: clamp examples and idempotence") {
  const std::size_t n = 2;
  // Z + M + K entrywise >= 0 -> Q = 0.
  const SymMatrix pos = test::random_sym(n, 20, 0.1, 1.0);
  CHECK(solve_q(pos, SymMatrix(n), SymMatrix(n)).max_abs() == 0.0);

  // -(Z + M + K) = [[1,-2],[-2,3]] -> [[1,0],[0,3]].
  const SymMatrix zmk = SymMatrix{{-1.0, 2.0}, {2.0, -3.0}};
  const SymMatrix q = solve_q(zmk, SymMatrix(n), SymMatrix(n));
  CHECK(q(0, 0) == doctest::Approx(1.0));
  CHECK(q(0, 1) == doctest::Approx(0.0));
  CHECK(q(1, 1) == doctest::Approx(3.0));

  const SymMatrix q2 = solve_q(zmk, SymMatrix(n), SymMatrix(n));
  CHECK(test::max_abs_diff(q, q2) == 0.0);
}

TEST_CASE("recover_primal: zero state returns K; identity with Z = P+") {
  const SymMatrix K = test::random_sym(5, 30);
  const DualState zero = make_dual_state(K, SymMatrix(5), SymMatrix(5), std::vector<double>(5, 0.0));
  CHECK(test::max_abs_diff(recover_primal(zero, K), K) <= 1e-14);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandomState st = random_state(6, 3000 + seed);
    DualState ds = make_dual_state(st.K, SymMatrix(6), st.Q, st.u);
    ds.Z = solve_z(ds);
    const SymMatrix f = recover_primal(ds, st.K);
    const SymMatrix neg_pneg = -1.0 * ds.Pneg;
    CHECK(fro_norm(f - neg_pneg) <= 1e-10);
  }
}

TEST_CASE("primal_objective examples") {
  const SymMatrix K = test::random_sym(4, 40);
  CHECK(primal_objective(K, K) == doctest::Approx(0.0));
  const SymMatrix f = SymMatrix{{0.5, 0.5}, {0.5, 0.5}};
  CHECK(primal_objective(f, SymMatrix::identity(2)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(primal_objective(K, SymMatrix::identity(3)), std::invalid_argument);
}

TEST_CASE("ld_ssc solvers: doubly stochastic PSD inputs are fixed points") {
  for (std::size_t n : {3, 6}) {
    const SymMatrix id = SymMatrix::identity(n);
    const auto [f1, r1] = ld_ssc1(id);
    CHECK(test::max_abs_diff(f1, id) <= 1e-6);
    CHECK(r1.converged);
    const auto [f2, r2] = ld_ssc2(id);
    CHECK(test::max_abs_diff(f2, id) <= 1e-6);

    const SymMatrix flat = flat_ds(n);
    const auto [g1, s1] = ld_ssc1(flat);
    CHECK(test::max_abs_diff(g1, flat) <= 1e-6);
    const auto [g2, s2] = ld_ssc2(flat);
    CHECK(test::max_abs_diff(g2, flat) <= 1e-6);
  }
}

TEST_CASE("ld_ssc solvers match the exhaustive 2x2 oracle") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const SymMatrix K = test::random_sym(2, 50 + seed, -1.0, 1.5);
    const SymMatrix expect = best_2x2(K);
    const auto [f1, r1] = ld_ssc1(K);
    const auto [f2, r2] = ld_ssc2(K);
    CHECK(test::max_abs_diff(f1, expect) <= 1e-4);
    CHECK(test::max_abs_diff(f2, expect) <= 1e-4);
  }
}

TEST_CASE("ld_ssc solvers match the Dykstra oracle on random 10x10 input") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SymMatrix K = test::random_sym(10, 70 + seed);
    const auto dyk = oracle::dykstra_project(
        K, {oracle::SetId::affine, oracle::SetId::nonneg, oracle::SetId::psd}, 1e-10, 100000);
    REQUIRE(dyk.converged);

    const auto [f1, r1] = ld_ssc1(K);
    const auto [f2, r2] = ld_ssc2(K);
    CHECK(fro_norm(f1 - dyk.F) <= 1e-4);
    CHECK(fro_norm(f2 - dyk.F) <= 1e-4);
    CHECK(fro_norm(f1 - f2) <= 1e-4);

    // Feasibility and duality gap at exit. The gap may dip slightly
    // negative because the recovered F is only feasible to tolerance.
    for (const auto& [f, r] : {std::pair(f1, r1), std::pair(f2, r2)}) {
      for (double rs : f.row_sums()) CHECK(std::fabs(rs - 1.0) <= 1e-5);
      CHECK(f.min_entry() >= -1e-6);
      CHECK(eig(f).values.back() >= -1e-6);
      CHECK(std::fabs(r.duality_gap) <= 1e-5 * std::max(1.0, fro_norm_sq(K)));
      if (r.converged) CHECK(r.duality_gap >= -1e-6 * std::max(1.0, fro_norm_sq(K)));
    }

    // Joint quasi-Newton needs far fewer dual evaluations than the
    // outer-times-inner total of the coordinate-descent variant.
    CHECK(r2.evals < static_cast<long>(r1.iterations) * 10);
  }
}

TEST_CASE("ld_ssc1: reduced dual objective is non-increasing over outer iterations") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const SymMatrix K = test::random_sym(8, 80 + seed);
    const auto [f, rep] = ld_ssc1(K);
    REQUIRE(rep.trace.size() == static_cast<std::size_t>(rep.iterations));
    for (std::size_t t = 1; t < rep.trace.size(); ++t)
      CHECK(rep.trace[t].dual_objective <= rep.trace[t - 1].dual_objective + 1e-10);
  }
}

TEST_CASE("ld_ssc2 matches ld_ssc1 and both solvers report coherent traces") {
  const SymMatrix K = test::random_sym(7, 91);
  const auto [f1, r1] = ld_ssc1(K);
  const auto [f2, r2] = ld_ssc2(K);
  CHECK(fro_norm(f1 - f2) <= 1e-4);
  CHECK(r2.trace.size() == static_cast<std::size_t>(r2.iterations));
  // Gap reported in the trace closes toward the end.
  CHECK(std::fabs(r1.trace.back().duality_gap) <= 1e-4 * std::max(1.0, fro_norm_sq(K)));
  CHECK(std::fabs(r2.trace.back().duality_gap) <= 1e-4 * std::max(1.0, fro_norm_sq(K)));
}

TEST_CASE("q-identity initialization is available and converges to the same point") {
  const SymMatrix K = test::random_sym(6, 95);
  SolverConfig cfg;
  cfg.init_q_identity = true;
  const auto [fq, rq] = ld_ssc1(K, cfg);
  const auto [f0, r0] = ld_ssc1(K);
  CHECK(fro_norm(fq - f0) <= 1e-4);
}

TEST_CASE("solvers reject non-finite input") {
  SymMatrix K(3);
  K.set(1, 2, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(ld_ssc1(K), std::invalid_argument);
  CHECK_THROWS_AS(ld_ssc2(K), std::invalid_argument);
}

TEST_CASE("make_dual_state validates Q nonnegativity") {
  SymMatrix q(3);
  q.set(0, 1, -0.5);
  CHECK_THROWS_AS(make_dual_state(SymMatrix::identity(3), SymMatrix(3), q, {0.0, 0.0, 0.0}),
                  std::invalid_argument);
}
