#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ssc/normalize.hpp"
#include "ssc/oracle.hpp"

using namespace ssc;
using oracle::SetId;

TEST_CASE("project_affine_ds: feasible fixed point and hand case") {
  // Row sums already 1.
  const SymMatrix ds = SymMatrix{{0.7, 0.3}, {0.3, 0.7}};
  CHECK(test::max_abs_diff(oracle::project_affine_ds(ds), ds) <= 1e-14);

  // X = 0, n = 2: s = 1/2, mu = (1/4, 1/4), R = [[.5,.5],[.5,.5]].
  const SymMatrix r = oracle::project_affine_ds(SymMatrix(2));
  CHECK(r(0, 0) == doctest::Approx(0.5));
  CHECK(r(0, 1) == doctest::Approx(0.5));
  CHECK(r(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("project_affine_ds: result is feasible and optimal in the affine set") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 7;
    const SymMatrix x = test::random_sym(n, 40 + seed);
    const SymMatrix r = oracle::project_affine_ds(x);
    for (double rs : r.row_sums()) CHECK(std::fabs(rs - 1.0) <= 1e-12);

    // Perturbations within the affine set never get closer to x.
    const double base = fro_norm(x - r);
    for (std::uint64_t c = 0; c < 4; ++c) {
      const SymMatrix g = test::random_sym(n, 90 + 10 * seed + c);
      const SymMatrix e = oracle::project_affine_ds(x + g) - r;  // tangent direction
      for (double eps : {0.1, -0.1, 0.01}) {
        const SymMatrix cand = r + eps * e;
        CHECK(base <= fro_norm(x - cand) + 1e-10);
      }
    }
  }
}

TEST_CASE("project_nonneg clamps and is idempotent") {
  const SymMatrix x = SymMatrix{{-1.0, 2.0}, {2.0, -3.0}};
  const SymMatrix r = oracle::project_nonneg(x);
  CHECK(r(0, 0) == 0.0);
  CHECK(r(0, 1) == 2.0);
  CHECK(r(1, 1) == 0.0);
  CHECK(test::max_abs_diff(oracle::project_nonneg(r), r) == 0.0);

  const SymMatrix pos = test::random_sym(5, 3, 0.1, 2.0);
  CHECK(test::max_abs_diff(oracle::project_nonneg(pos), pos) == 0.0);
}

TEST_CASE("single-set Dykstra equals the direct projector") {
  const SymMatrix k = test::random_sym(6, 11);
  CHECK(test::max_abs_diff(oracle::dykstra_project(k, {SetId::affine}).F,
                           oracle::project_affine_ds(k)) <= 1e-12);
  CHECK(test::max_abs_diff(oracle::dykstra_project(k, {SetId::nonneg}).F,
                           oracle::project_nonneg(k)) <= 1e-12);
  CHECK(test::max_abs_diff(oracle::dykstra_project(k, {SetId::psd}).F, positive_part(k)) <= 1e-9);
}

TEST_CASE("dykstra: feasible input is a fixed point") {
  // 11^T/n is doubly stochastic, nonnegative and PSD.
  const std::size_t n = 5;
  SymMatrix k(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) k.set(i, j, 1.0 / n);
  const auto res = oracle::dykstra_project(k, {SetId::affine, SetId::nonneg, SetId::psd});
  CHECK(res.converged);
  CHECK(test::max_abs_diff(res.F, k) <= 1e-9);
}

TEST_CASE("dykstra two-set agrees with normalize_frobenius_qp") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SymMatrix k = test::random_sym(6, 60 + seed);
    const auto res = oracle::dykstra_project(k, {SetId::affine, SetId::nonneg});
    const NormalizeResult fqp = normalize_frobenius_qp(k, 1e-9, 200000);
    CHECK(fro_norm(res.F - fqp.K_hat) <= 1e-5);
  }
}

TEST_CASE("dykstra: single-set distances bound the final distance; exit is feasible") {
  const SymMatrix k = test::random_sym(8, 77);
  const auto res = oracle::dykstra_project(k, {SetId::affine, SetId::nonneg, SetId::psd});
  CHECK(res.converged);

  // The final point lies in every selected set, so no per-set projection
  // distance can exceed the final distance.
  const double final_dist = fro_norm(res.F - k);
  CHECK(fro_norm(oracle::project_affine_ds(k) - k) <= final_dist + 1e-9);
  CHECK(fro_norm(oracle::project_nonneg(k) - k) <= final_dist + 1e-9);
  CHECK(fro_norm(positive_part(k) - k) <= final_dist + 1e-9);

  // No sampled feasible point is closer to K (flat matrix and its convex
  // combinations with the output are feasible).
  const std::size_t n = k.size();
  SymMatrix flat(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) flat.set(i, j, 1.0 / n);
  for (double alpha : {1.0, 0.5, 0.1, 0.01}) {
    const SymMatrix cand = alpha * flat + (1.0 - alpha) * res.F;
    CHECK(final_dist <= fro_norm(cand - k) + 1e-8);
  }

  for (double rs : res.F.row_sums()) CHECK(std::fabs(rs - 1.0) <= 1e-6);
  CHECK(res.F.min_entry() >= -1e-7);
  CHECK(eig(res.F).values.back() >= -1e-7);
}

TEST_CASE("dykstra: set order does not change the limit (projection uniqueness)") {
  const SymMatrix k = test::random_sym(7, 99);
  const auto a = oracle::dykstra_project(k, {SetId::affine, SetId::nonneg, SetId::psd});
  const auto b = oracle::dykstra_project(k, {SetId::psd, SetId::affine, SetId::nonneg});
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(fro_norm(a.F - b.F) <= 1e-8 * std::max(1.0, fro_norm(a.F)));
}

TEST_CASE("dykstra rejects an empty set selection") {
  CHECK_THROWS_AS(oracle::dykstra_project(SymMatrix::identity(3), {}), std::invalid_argument);
}
