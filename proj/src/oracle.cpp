#include "ssc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssc::oracle {

SymMatrix project_affine_ds(const SymMatrix& x) {
  const std::size_t n = x.size();
  const std::vector<double> rs = x.row_sums();
  double total = 0.0;
  for (double v : rs) total += v;

  const double nn = static_cast<double>(n);
  const double s = (nn - total) / (2.0 * nn);
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = (1.0 - rs[i] - s) / nn;

  SymMatrix r = x;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.data()[i * n + j] += mu[i] + mu[j];
  return r;
}

SymMatrix project_nonneg(const SymMatrix& x) {
  SymMatrix r = x;
  const std::size_t nn = x.size() * x.size();
  for (std::size_t i = 0; i < nn; ++i) r.data()[i] = std::max(0.0, r.data()[i]);
  return r;
}

SymMatrix project_psd(const SymMatrix& x) { return positive_part(x); }

DykstraResult dykstra_project(const SymMatrix& K, const std::vector<SetId>& sets, double tol,
                              int max_cycles) {
  if (sets.empty()) throw std::invalid_argument("dykstra_project: need at least one set");

  const auto apply = [](SetId id, const SymMatrix& m) {
    switch (id) {
      case SetId::affine: return project_affine_ds(m);
      case SetId::nonneg: return project_nonneg(m);
      case SetId::psd: return project_psd(m);
    }
    throw std::logic_error("dykstra_project: unknown set");
  };

  const std::size_t n = K.size();
  SymMatrix x = K;
  std::vector<SymMatrix> corrections(sets.size(), SymMatrix(n));

  DykstraResult res;
  for (int cycle = 1; cycle <= max_cycles; ++cycle) {
    const SymMatrix prev = x;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const SymMatrix shifted = x + corrections[k];
      SymMatrix y = apply(sets[k], shifted);
      corrections[k] = shifted - y;
      x = std::move(y);
    }
    res.cycles = cycle;
    res.movement = fro_norm(x - prev);
    res.cycle_distances.push_back(fro_norm(x - K));
    if (res.movement <= tol) {
      res.converged = true;
      break;
    }
  }
  res.F = std::move(x);
  return res;
}

}  // namespace ssc::oracle
