#include "ssc/boxqn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace ssc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

double inf_norm(const std::vector<double>& a) {
  double r = 0.0;
  for (double v : a) r = std::max(r, std::fabs(v));
  return r;
}

}  // namespace

std::vector<double> minimize_box_qn(const ObjectiveFn& f, std::vector<double> x0,
                                    const std::vector<double>* lower_bounds,
                                    const BoxQNConfig& cfg, BoxQNReport* report,
                                    const MonitorFn& monitor) {
  const std::size_t n = x0.size();
  if (lower_bounds && lower_bounds->size() != n)
    throw std::invalid_argument("minimize_box_qn: bounds size mismatch");

  const auto lower = [&](std::size_t i) { return lower_bounds ? (*lower_bounds)[i] : -kInf; };
  const auto project = [&](std::vector<double>& x) {
    if (!lower_bounds) return;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i], lower(i));
  };

  std::vector<double> x = std::move(x0);
  project(x);

  std::vector<double> g(n, 0.0);
  BoxQNReport rep;
  const auto eval = [&](const std::vector<double>& pt, std::vector<double>& grad) {
    const double v = f(std::span<const double>(pt), std::span<double>(grad));
    ++rep.evals;
    if (!std::isfinite(v)) throw std::runtime_error("minimize_box_qn: objective returned non-finite value");
    for (double gv : grad)
      if (!std::isfinite(gv)) throw std::runtime_error("minimize_box_qn: gradient has non-finite entries");
    return v;
  };

  double fx = eval(x, g);

  std::deque<Correction> mem;
  std::vector<double> pg(n), d(n), xt(n), gt(n);

  const auto projected_gradient = [&]() {
    // x - proj(x - g), the stationarity residual for the box.
    for (std::size_t i = 0; i < n; ++i) {
      const double step = x[i] - g[i];
      pg[i] = x[i] - std::max(step, lower(i));
    }
  };

  for (int iter = 1;; ++iter) {
    projected_gradient();
    const double pg_norm = inf_norm(pg);
    rep.final_pg_norm = pg_norm;
    rep.iterations = iter - 1;
    if (pg_norm <= cfg.pg_tol) {
      rep.converged = true;
      break;
    }
    if (monitor && iter > 1 && monitor(iter - 1, std::span<const double>(x), fx)) {
      rep.stopped_by_monitor = true;
      break;
    }
    if (rep.evals >= cfg.max_evals) break;

    // Active set: coordinates pinned at the bound with the gradient
    // pushing further in.
    const double eps_act = 1e-12 * (1.0 + inf_norm(x));
    std::vector<bool> active(n, false);
    if (lower_bounds) {
      for (std::size_t i = 0; i < n; ++i)
        active[i] = x[i] <= lower(i) + eps_act && g[i] > 0.0;
    }

    // Two-loop recursion on the free variables.
    for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -g[i];
    if (!mem.empty()) {
      std::vector<double> q(n);
      for (std::size_t i = 0; i < n; ++i) q[i] = -d[i];  // masked gradient
      std::vector<double> alpha(mem.size());
      for (std::size_t k = mem.size(); k-- > 0;) {
        alpha[k] = mem[k].rho * dot(mem[k].s, q);
        for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * mem[k].y[i];
      }
      const auto& last = mem.back();
      const double gamma = dot(last.s, last.y) / std::max(dot(last.y, last.y), 1e-300);
      for (double& v : q) v *= gamma;
      for (std::size_t k = 0; k < mem.size(); ++k) {
        const double beta = mem[k].rho * dot(mem[k].y, q);
        for (std::size_t i = 0; i < n; ++i) q[i] += mem[k].s[i] * (alpha[k] - beta);
      }
      for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -q[i];
    }

    double gd = dot(g, d);
    if (!(gd < 0.0)) {  // not a descent direction; fall back to steepest
      for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -g[i];
      gd = dot(g, d);
      if (!(gd < 0.0)) break;  // stationary on the free set
    }

    // Backtracking with sufficient decrease measured against the actual
    // (projected) displacement.
    double step = (iter == 1 && mem.empty()) ? std::min(1.0, 1.0 / std::max(pg_norm, 1e-12)) : 1.0;
    bool accepted = false;
    double ft = fx;
    for (int ls = 0; ls < cfg.max_line_evals; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + step * d[i];
      project(xt);
      double dir_deriv = 0.0;  // g . (xt - x)
      for (std::size_t i = 0; i < n; ++i) dir_deriv += g[i] * (xt[i] - x[i]);
      ft = eval(xt, gt);
      if (ft <= fx + cfg.armijo_c * dir_deriv && dir_deriv < 0.0) {
        accepted = true;
        break;
      }
      if (rep.evals >= cfg.max_evals) break;
      step *= 0.5;
    }
    if (!accepted) {
      rep.line_search_failed = rep.evals < cfg.max_evals;
      break;
    }

    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = xt[i] - x[i];
      c.y[i] = gt[i] - g[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-10 * std::sqrt(dot(c.s, c.s)) * std::sqrt(dot(c.y, c.y))) {
      c.rho = 1.0 / sy;
      mem.push_back(std::move(c));
      if (mem.size() > static_cast<std::size_t>(std::max(cfg.memory, 1))) mem.pop_front();
    }

    x = xt;
    g = gt;
    fx = ft;
  }

  rep.final_value = fx;
  if (report) *report = rep;
  return x;
}

}  // namespace ssc
