#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "anderson/linalg.hpp"
#include "anderson/problems.hpp"

namespace anderson {

/// Window size that never saturates; AA with this window is "AA(infinity)".
inline constexpr std::size_t kUnboundedWindow = std::numeric_limits<std::size_t>::max();

/// Iterates whose norm exceeds this are treated as divergence.
inline constexpr double kDivergenceThreshold = 1e12;

struct AccelConfig {
  std::size_t window_m = 1;  ///< 0 = plain fixed-point iteration
  bool restart = false;
  std::size_t max_iters = 100;
  double stop_tol = 1e-12;  ///< stop once ||r(x_k)|| <= stop_tol
  double rank_tol_scale = 1.0;
};

/// Throws Error(InvalidArgument) if max_iters == 0 or stop_tol <= 0.
void validate(const AccelConfig& cfg);

/// Coefficients of one Anderson step.
struct BetaSolution {
  Vector beta;                        ///< length = active window size
  double residual_norm_before = 0.0;  ///< ||r_k||
  double ls_objective = 0.0;          ///< ||r_k + R_k beta||
  Index rank = 0;
};

enum class RunStatus { MaxIters, Converged, Diverged };

std::string_view to_string(RunStatus status);

/// Per-iteration record. Index k refers to iterate x_k; betas[k] holds the
/// coefficients of the step x_k -> x_{k+1}, so betas.size() == iterates.size() - 1.
/// error_norms, sigma_k and error_ratios are empty unless the fixed point is known;
/// sigma_k[0] and error_ratios[0] are NaN.
struct IterationTrace {
  std::vector<Vector> iterates;
  std::vector<double> residual_norms;
  std::vector<double> error_norms;
  std::vector<double> sigma_k;
  std::vector<BetaSolution> betas;
  std::vector<double> error_ratios;
  std::optional<double> fixed_point_norm;
  RunStatus status = RunStatus::MaxIters;

  std::size_t last_k() const { return iterates.empty() ? 0 : iterates.size() - 1; }
  bool has_errors() const { return !error_norms.empty(); }
};

/// One entry of Anderson history: an iterate with its cached q-value and residual.
struct HistoryEntry {
  Vector x;
  Vector qx;
  Vector r;
};

HistoryEntry make_history_entry(const FixedPointProblem& problem, Vector x);

/// One AA step from history ordered oldest..newest (newest is x_k). The active
/// window is history.size() - 1. Columns of R_k are r_k - r_{k-i}, i = 1..window.
/// Returns x_{k+1} = q(x_k) + sum_i beta_i (q(x_k) - q(x_{k-i})), beta = -pinv(R_k) r_k.
std::pair<Vector, BetaSolution> aa_step(std::span<const HistoryEntry> history,
                                        double rank_tol_scale = 1.0);

/// Plain iteration x_{k+1} = q(x_k).
IterationTrace fp_run(const FixedPointProblem& problem, const Vector& x0, const AccelConfig& cfg);

/// Windowed AA(m): window min(k, m) at step k. cfg.restart is ignored.
IterationTrace aa_run(const FixedPointProblem& problem, const Vector& x0, const AccelConfig& cfg);

/// Restarted AA(m): each cycle is one plain step followed by steps with windows
/// 1..m; the history is then cleared and the next cycle starts from the latest iterate.
IterationTrace aa_restarted_run(const FixedPointProblem& problem, const Vector& x0,
                                const AccelConfig& cfg);

/// Dispatches on cfg: window 0 -> fp_run, restart -> aa_restarted_run, else aa_run.
IterationTrace run_scheme(const FixedPointProblem& problem, const Vector& x0,
                          const AccelConfig& cfg);

/// Full-memory GMRES on (I - M) x = b (modified Gram-Schmidt Arnoldi, Givens
/// rotations). iterates[k] is the k-th GMRES iterate; residual_norms[k] = ||b - A x_k||.
IterationTrace gmres_run(const AffineSpec& spec, const Vector& x0, const AccelConfig& cfg);

struct GmresComparison {
  std::vector<double> deviations;  ///< deviations[k] = ||x^AA_{k+1} - q(x^GMRES_k)||
  double max_deviation = 0.0;
};

/// Compares full-window AA with GMRES via x^AA_{k+1} = q(x^GMRES_k) for k < k_max.
/// The comparison stops early (with fewer entries) once GMRES has converged to
/// rounding level. Throws Error(StagnationDetected) if the GMRES residual fails to
/// decrease strictly before that.
GmresComparison aa_full_window_vs_gmres_check(const AffineSpec& spec, const Vector& x0,
                                              std::size_t k_max, double rank_tol_scale = 1.0);

}  // namespace anderson
