#include "ssc/ldssc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ssc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double vec_sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// One dual-function evaluation: P = -(Q + M + K), its eigendecomposition,
// and everything the gradients, the recovered primal and the stopping test
// need. This is the per-iteration unit of work (one eigendecomposition).
struct Split {
  SymMatrix P;
  SymMatrix Pneg;
  std::vector<double> neg_row_sums;
  double neg_fro_sq = 0.0;
  double max_pneg_entry = 0.0;
  double feas_row = 0.0;
};

Split eval_split(const SymMatrix& K, const SymMatrix& Q, const std::vector<double>& u) {
  const std::size_t n = K.size();
  SymMatrix P(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      P.data()[i * n + j] = -(Q(i, j) + u[i] + u[j] + K(i, j));

  Split s;
  const EigenPair ep = eig(P);
  s.Pneg = spectral_part(ep, false);
  s.P = std::move(P);

  double max_abs = 0.0;
  for (double l : ep.values) max_abs = std::max(max_abs, std::fabs(l));
  const double thresh = kEigZeroRel * max_abs;
  for (double l : ep.values)
    if (l < -thresh) s.neg_fro_sq += l * l;

  s.neg_row_sums = s.Pneg.row_sums();
  s.max_pneg_entry = s.Pneg.max_entry();
  for (std::size_t i = 0; i < n; ++i)
    s.feas_row = std::max(s.feas_row, std::fabs(-s.neg_row_sums[i] - 1.0));
  return s;
}

double reduced_objective(const Split& s, const std::vector<double>& u) {
  return 0.5 * s.neg_fro_sq - 2.0 * vec_sum(u);
}

// F = -P-.
SymMatrix primal_from_split(const Split& s) {
  SymMatrix f = s.Pneg;
  f *= -1.0;
  return f;
}

IterRecord make_record(int iteration, const Split& s, const std::vector<double>& u,
                       const SymMatrix& K, double k_fro_sq, double wall_s) {
  IterRecord r;
  r.iteration = iteration;
  r.dual_objective = reduced_objective(s, u);
  const SymMatrix f = primal_from_split(s);
  r.primal_objective = primal_objective(f, K);
  // Dual value in the maximization form of the original problem.
  const double dual_value = -0.5 * s.neg_fro_sq + 0.5 * k_fro_sq + 2.0 * vec_sum(u);
  r.duality_gap = r.primal_objective - dual_value;
  r.feas_row = s.feas_row;
  r.feas_neg = std::max(0.0, s.max_pneg_entry);
  r.wall_s = wall_s;
  return r;
}

void validate_input(const SymMatrix& K) {
  const std::size_t nn = K.size() * K.size();
  for (std::size_t i = 0; i < nn; ++i)
    if (!std::isfinite(K.data()[i]))
      throw std::invalid_argument("ld_ssc: affinity matrix has non-finite entries");
}

bool step_converged(const SolverConfig& cfg, double dobj, double prev_dobj, const Split& s) {
  const bool obj_ok = std::fabs(dobj - prev_dobj) <= cfg.obj_rel_tol * std::max(1.0, std::fabs(prev_dobj));
  const bool feas_ok = s.feas_row <= cfg.feas_tol && s.max_pneg_entry <= cfg.neg_tol;
  return obj_ok && feas_ok;
}

}  // namespace

SymMatrix pair_sum_matrix(const std::vector<double>& u) {
  const std::size_t n = u.size();
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.data()[i * n + j] = u[i] + u[j];
  return m;
}

DualState make_dual_state(const SymMatrix& K, SymMatrix Z, SymMatrix Q, std::vector<double> u) {
  const std::size_t n = K.size();
  if (Z.size() != n || Q.size() != n || u.size() != n)
    throw std::invalid_argument("make_dual_state: dimension mismatch");
  if (Q.min_entry() < 0.0)
    throw std::invalid_argument("make_dual_state: Q must be entrywise nonnegative");

  Split s = eval_split(K, Q, u);
  DualState st;
  st.Z = std::move(Z);
  st.Q = std::move(Q);
  st.u = std::move(u);
  st.P = std::move(s.P);
  st.Pneg = std::move(s.Pneg);
  st.pneg_row_sums = std::move(s.neg_row_sums);
  st.pneg_fro_sq = s.neg_fro_sq;
  return st;
}

double dual_objective(const DualState& s, const SymMatrix& K) {
  // Cache coherence: the stored P must equal -(Q + M + K) whenever read.
  const std::size_t n = K.size();
  double drift = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      drift = std::max(drift, std::fabs(s.P(i, j) + s.Q(i, j) + s.u[i] + s.u[j] + K(i, j)));
  if (drift > 1e-12 * std::max(1.0, s.P.max_abs()))
    throw std::logic_error("dual_objective: stale DualState cache");

  // ||Z + Q + M + K||_F^2 = ||Z - P||_F^2.
  const SymMatrix a = s.Z - s.P;
  return 0.5 * fro_norm_sq(a) - 2.0 * vec_sum(s.u);
}

std::vector<double> grad_u(const DualState& s) {
  std::vector<double> g(s.u.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = -2.0 - 2.0 * s.pneg_row_sums[i];
  return g;
}

SymMatrix grad_q(const DualState& s) {
  SymMatrix g = s.Pneg;
  g *= -1.0;
  return g;
}

SymMatrix solve_z(const DualState& s) { return s.P - s.Pneg; }

SymMatrix solve_q(const SymMatrix& Z, const SymMatrix& M, const SymMatrix& K) {
  const std::size_t n = Z.size();
  if (M.size() != n || K.size() != n) throw std::invalid_argument("solve_q: dimension mismatch");
  SymMatrix q(n);
  for (std::size_t i = 0; i < n * n; ++i)
    q.data()[i] = std::max(0.0, -(Z.data()[i] + M.data()[i] + K.data()[i]));
  return q;
}

SymMatrix recover_primal(const DualState& s, const SymMatrix& K) {
  const std::size_t n = K.size();
  const SymMatrix m = pair_sum_matrix(s.u);
  SymMatrix f(n);
  for (std::size_t i = 0; i < n * n; ++i)
    f.data()[i] = K.data()[i] + s.Q.data()[i] + m.data()[i] + s.Z.data()[i];
  return f;
}

double primal_objective(const SymMatrix& F, const SymMatrix& K) {
  if (F.size() != K.size()) throw std::invalid_argument("primal_objective: dimension mismatch");
  return 0.5 * fro_norm_sq(K - F);
}

std::pair<SymMatrix, SolverReport> ld_ssc1(const SymMatrix& K, const SolverConfig& cfg) {
  validate_input(K);
  const std::size_t n = K.size();
  const auto t0 = Clock::now();
  const double k_fro_sq = fro_norm_sq(K);

  SymMatrix Q = cfg.init_q_identity ? SymMatrix::identity(n) : SymMatrix(n);
  std::vector<double> u(n, 0.0);

  SolverReport rep;
  double prev_dobj = std::numeric_limits<double>::infinity();
  Split split = eval_split(K, Q, u);
  ++rep.evals;

  for (int outer = 1; outer <= cfg.outer_max; ++outer) {
    // u-subproblem at fixed Q, warm-started at the current u.
    BoxQNConfig qn;
    qn.memory = cfg.qn_memory;
    qn.max_evals = cfg.inner_evals;
    qn.pg_tol = 1e-10;
    BoxQNReport qrep;
    const ObjectiveFn fu = [&](std::span<const double> x, std::span<double> g) {
      const std::vector<double> uv(x.begin(), x.end());
      const Split s = eval_split(K, Q, uv);
      for (std::size_t i = 0; i < n; ++i) g[i] = -2.0 - 2.0 * s.neg_row_sums[i];
      return reduced_objective(s, uv);
    };
    u = minimize_box_qn(fu, u, nullptr, qn, &qrep);
    rep.evals += qrep.evals;

    // Z then Q, each in closed form.
    split = eval_split(K, Q, u);
    ++rep.evals;
    for (std::size_t i = 0; i < n * n; ++i)
      Q.data()[i] = std::max(0.0, Q.data()[i] + split.Pneg.data()[i]);

    split = eval_split(K, Q, u);
    ++rep.evals;

    const IterRecord rec = make_record(outer, split, u, K, k_fro_sq, seconds_since(t0));
    if (cfg.record_trace) rep.trace.push_back(rec);
    rep.iterations = outer;

    if (outer > 1 && step_converged(cfg, rec.dual_objective, prev_dobj, split)) {
      rep.converged = true;
      prev_dobj = rec.dual_objective;
      break;
    }
    prev_dobj = rec.dual_objective;
  }

  const IterRecord last = make_record(rep.iterations, split, u, K, k_fro_sq, seconds_since(t0));
  rep.dual_objective = last.dual_objective;
  rep.primal_objective = last.primal_objective;
  rep.duality_gap = last.duality_gap;
  rep.u_sum = vec_sum(u);
  rep.wall_time_s = seconds_since(t0);
  return {primal_from_split(split), rep};
}

std::pair<SymMatrix, SolverReport> ld_ssc2(const SymMatrix& K, const SolverConfig& cfg) {
  validate_input(K);
  const std::size_t n = K.size();
  const auto t0 = Clock::now();
  const double k_fro_sq = fro_norm_sq(K);
  const std::size_t nq = n * n;

  // Joint variable: Q's n^2 entries (lower bound 0) then u (free).
  std::vector<double> x0(nq + n, 0.0);
  if (cfg.init_q_identity)
    for (std::size_t i = 0; i < n; ++i) x0[i * n + i] = 1.0;
  std::vector<double> lower(nq + n, 0.0);
  for (std::size_t i = 0; i < n; ++i) lower[nq + i] = -std::numeric_limits<double>::infinity();

  SolverReport rep;
  Split last_split;
  std::vector<double> last_u(n, 0.0);

  const auto unpack = [&](std::span<const double> x, SymMatrix& Q, std::vector<double>& u) {
    Q = SymMatrix(n);
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nq), Q.data());
    Q.symmetrize();
    u.assign(x.begin() + static_cast<std::ptrdiff_t>(nq), x.end());
  };

  const ObjectiveFn fqu = [&](std::span<const double> x, std::span<double> g) {
    SymMatrix Q;
    std::vector<double> u;
    unpack(x, Q, u);
    Split s = eval_split(K, Q, u);
    for (std::size_t i = 0; i < nq; ++i) g[i] = -s.Pneg.data()[i];
    for (std::size_t i = 0; i < n; ++i) g[nq + i] = -2.0 - 2.0 * s.neg_row_sums[i];
    const double v = reduced_objective(s, u);
    last_split = std::move(s);
    last_u = std::move(u);
    ++rep.evals;
    return v;
  };

  double prev_dobj = std::numeric_limits<double>::infinity();
  bool converged = false;
  const MonitorFn monitor = [&](int iteration, std::span<const double>, double) {
    // The last objective evaluation is the accepted point, so last_split
    // matches the iterate the quasi-Newton loop just moved to.
    const IterRecord rec = make_record(iteration, last_split, last_u, K, k_fro_sq, seconds_since(t0));
    if (cfg.record_trace) rep.trace.push_back(rec);
    rep.iterations = iteration;
    const bool stop = step_converged(cfg, rec.dual_objective, prev_dobj, last_split);
    prev_dobj = rec.dual_objective;
    if (stop) converged = true;
    return stop;
  };

  BoxQNConfig qn;
  qn.memory = cfg.qn_memory;
  qn.max_evals = cfg.max_evals;
  qn.pg_tol = 1e-12;
  BoxQNReport qrep;
  const std::vector<double> xf = minimize_box_qn(fqu, std::move(x0), &lower, qn, &qrep, monitor);

  SymMatrix Q;
  std::vector<double> u;
  unpack(std::span<const double>(xf), Q, u);
  const Split split = eval_split(K, Q, u);
  ++rep.evals;

  rep.converged = converged;
  if (rep.iterations == 0) rep.iterations = qrep.iterations;
  const IterRecord last = make_record(rep.iterations, split, u, K, k_fro_sq, seconds_since(t0));
  rep.dual_objective = last.dual_objective;
  rep.primal_objective = last.primal_objective;
  rep.duality_gap = last.duality_gap;
  rep.u_sum = vec_sum(u);
  rep.wall_time_s = seconds_since(t0);
  return {primal_from_split(split), rep};
}

}  // namespace ssc
