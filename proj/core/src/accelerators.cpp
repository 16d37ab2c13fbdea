#include "anderson/accelerators.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "anderson/error.hpp"

namespace anderson {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class TraceRecorder {
 public:
  explicit TraceRecorder(const FixedPointProblem& problem) : fixed_point_(problem.known_fixed_point) {
    if (fixed_point_) trace_.fixed_point_norm = fixed_point_->norm();
  }

  void record(const Vector& x, double residual_norm) {
    const std::size_t k = trace_.iterates.size();
    trace_.iterates.push_back(x);
    trace_.residual_norms.push_back(residual_norm);
    if (!fixed_point_) return;

    const double err = (x - *fixed_point_).norm();
    const double sigma = k == 0 ? kNaN : std::pow(err, 1.0 / static_cast<double>(k));
    double ratio = kNaN;
    if (k > 0 && trace_.error_norms.back() > 0.0) ratio = err / trace_.error_norms.back();
    trace_.error_norms.push_back(err);
    trace_.sigma_k.push_back(sigma);
    trace_.error_ratios.push_back(ratio);
  }

  IterationTrace& trace() { return trace_; }

 private:
  std::optional<Vector> fixed_point_;
  IterationTrace trace_;
};

enum class WindowPolicy { Sliding, Restarted };

IterationTrace run_accelerated(const FixedPointProblem& problem, const Vector& x0,
                               const AccelConfig& cfg, std::size_t window_m, WindowPolicy policy) {
  validate(cfg);
  if (x0.size() != problem.dim) {
    throw Error(ErrorKind::InvalidArgument, "initial guess dimension does not match problem");
  }

  TraceRecorder recorder(problem);
  std::deque<HistoryEntry> history;
  history.push_back(make_history_entry(problem, x0));
  recorder.record(history.back().x, history.back().r.norm());
  IterationTrace& trace = recorder.trace();

  for (std::size_t step = 0; step < cfg.max_iters; ++step) {
    if (trace.residual_norms.back() <= cfg.stop_tol) break;

    while (history.size() > 1 && history.size() - 1 > window_m) history.pop_front();
    const std::vector<HistoryEntry> window(history.begin(), history.end());
    auto [x_next, beta] = aa_step(window, cfg.rank_tol_scale);
    const bool window_full = static_cast<std::size_t>(beta.beta.size()) == window_m;
    trace.betas.push_back(std::move(beta));

    if (!all_finite(x_next) || x_next.norm() > kDivergenceThreshold) {
      recorder.record(x_next, kNaN);
      trace.status = RunStatus::Diverged;
      return std::move(trace);
    }

    history.push_back(make_history_entry(problem, std::move(x_next)));
    recorder.record(history.back().x, history.back().r.norm());

    if (policy == WindowPolicy::Restarted && window_full) {
      HistoryEntry newest = std::move(history.back());
      history.clear();
      history.push_back(std::move(newest));
    }
  }

  trace.status = trace.residual_norms.back() <= cfg.stop_tol ? RunStatus::Converged
                                                              : RunStatus::MaxIters;
  return std::move(trace);
}

}  // namespace

void validate(const AccelConfig& cfg) {
  if (cfg.max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
  if (!(cfg.stop_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "stop_tol must be > 0");
  if (!(cfg.rank_tol_scale > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "rank_tol_scale must be > 0");
  }
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::MaxIters: return "max_iters";
    case RunStatus::Converged: return "converged";
    case RunStatus::Diverged: return "diverged";
  }
  return "unknown";
}

HistoryEntry make_history_entry(const FixedPointProblem& problem, Vector x) {
  HistoryEntry e;
  e.qx = problem.q(x);
  e.r = x - e.qx;
  e.x = std::move(x);
  return e;
}

std::pair<Vector, BetaSolution> aa_step(std::span<const HistoryEntry> history,
                                        double rank_tol_scale) {
  if (history.empty()) throw Error(ErrorKind::InvalidArgument, "aa_step: empty history");

  const HistoryEntry& newest = history.back();
  const Index window = static_cast<Index>(history.size()) - 1;
  const Index n = newest.x.size();

  BetaSolution sol;
  sol.residual_norm_before = newest.r.norm();
  if (window == 0) {
    sol.beta = Vector(0);
    sol.ls_objective = sol.residual_norm_before;
    return {newest.qx, std::move(sol)};
  }

  DenseMatrix R(n, window);
  DenseMatrix Q(n, window);
  for (Index i = 1; i <= window; ++i) {
    const HistoryEntry& older = history[history.size() - 1 - static_cast<std::size_t>(i)];
    R.col(i - 1) = newest.r - older.r;
    Q.col(i - 1) = newest.qx - older.qx;
  }

  LeastSquaresSolution ls = min_norm_lstsq(R, newest.r, rank_tol_scale);
  sol.rank = ls.info.numerical_rank;
  sol.ls_objective = (newest.r + R * ls.coeffs).norm();
  sol.beta = std::move(ls.coeffs);

  Vector x_next = newest.qx + Q * sol.beta;
  return {std::move(x_next), std::move(sol)};
}

IterationTrace fp_run(const FixedPointProblem& problem, const Vector& x0, const AccelConfig& cfg) {
  return run_accelerated(problem, x0, cfg, 0, WindowPolicy::Sliding);
}

IterationTrace aa_run(const FixedPointProblem& problem, const Vector& x0, const AccelConfig& cfg) {
  return run_accelerated(problem, x0, cfg, cfg.window_m, WindowPolicy::Sliding);
}

IterationTrace aa_restarted_run(const FixedPointProblem& problem, const Vector& x0,
                                const AccelConfig& cfg) {
  return run_accelerated(problem, x0, cfg, cfg.window_m, WindowPolicy::Restarted);
}

IterationTrace run_scheme(const FixedPointProblem& problem, const Vector& x0,
                          const AccelConfig& cfg) {
  if (cfg.window_m == 0) return fp_run(problem, x0, cfg);
  if (cfg.restart) return aa_restarted_run(problem, x0, cfg);
  return aa_run(problem, x0, cfg);
}

}  // namespace anderson
