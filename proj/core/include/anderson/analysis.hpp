#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "anderson/accelerators.hpp"
#include "anderson/augmented_map.hpp"
#include "anderson/problems.hpp"

namespace anderson {

inline constexpr std::size_t kDefaultTailWindow = 20;
inline constexpr double kDefaultSMargin = 0.05;
/// Errors at or below kErrorFloor * (1 + ||x*||) are rounding noise.
inline constexpr double kErrorFloor = 1e-14;

struct RFactorEstimate {
  double sigma_final = 0.0;     ///< sigma_k at the last usable k
  double sigma_tail_max = 0.0;  ///< max sigma_k over the last tail_window usable k
  std::size_t k_used = 0;       ///< last usable k
  bool converged = false;
};

/// Usable iterations are k = 1, 2, ... up to (not including) the first k whose error
/// is at or below the floor or is non-finite. Uses min(tail_window, usable count)
/// values for the tail. converged: the run converged or reached the floor, or the
/// tail sigma values lie within 1e-3 of each other.
/// Throws Error(InsufficientData) without error norms or without any usable iteration.
RFactorEstimate estimate_r_factor(const IterationTrace& trace,
                                  std::size_t tail_window = kDefaultTailWindow);

/// Axis-aligned box lower <= x <= upper.
struct Box {
  Vector lower;
  Vector upper;

  static Box cube(Index n, double half_width);
  static Box point(const Vector& x);
  Index dim() const { return lower.size(); }
};

/// Substream for item `id` of a seeded experiment; independent of thread schedule.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t id);

/// Uniform draw from box using the substream of init_id.
Vector sample_in_box(const Box& box, std::uint64_t seed, std::uint64_t init_id);

/// Uniform bins over [lo, hi]; values outside the range (including infinities and NaN)
/// are counted in the nearest end bin (NaN goes to the last bin), so counts sum to
/// values.size().
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

struct InitResult {
  std::size_t init_id = 0;
  std::size_t scheme_index = 0;
  Vector x0;
  std::optional<RFactorEstimate> estimate;  ///< empty when the run failed or had no usable data
  RunStatus status = RunStatus::MaxIters;
  std::string failure;  ///< error message for failed runs
};

struct SweepOptions {
  Box box;
  std::size_t n_inits = 1;
  std::uint64_t seed = 0;
  std::size_t tail_window = kDefaultTailWindow;
  double margin = kDefaultSMargin;
  std::size_t bins = 50;
};

struct SweepReport {
  std::vector<AccelConfig> schemes;
  /// Init-major: entry init_id * schemes.size() + scheme_index.
  std::vector<InitResult> per_init;
  std::vector<Histogram> histograms;  ///< per scheme, of sigma_final over [0, hist_hi]
  double hist_hi = 1.0;
  std::uint64_t seed = 0;
  /// rho(q'(x*)) when a jacobian is available.
  std::optional<double> rho;
  /// Per scheme: fraction of inits with sigma_final < rho - margin (NaN without rho).
  std::vector<double> s_fraction;

  const InitResult& at(std::size_t init_id, std::size_t scheme_index) const {
    return per_init[init_id * schemes.size() + scheme_index];
  }
  /// sigma_final for one scheme in init order; +inf for failed runs.
  std::vector<double> sigma_finals(std::size_t scheme_index) const;
};

/// Runs every scheme from the same n_inits random starting points. Failed runs are
/// recorded per init rather than thrown. Deterministic given the seed.
SweepReport monte_carlo_sweep(const FixedPointProblem& problem, std::span<const AccelConfig> schemes,
                              const SweepOptions& opts);

/// Fraction of values strictly below rho - margin.
double s_fraction(std::span<const double> sigma_finals, double rho, double margin = kDefaultSMargin);

struct DerivativeNormSamples {
  std::vector<double> norms;         ///< indexed by sample id
  std::size_t rank_deficient = 0;    ///< samples where D(d) was rank-deficient
  Histogram histogram;
};

/// ||DPsi(z*, d)|| for n_samples random unit directions d in R^{n(m+1)} (normalized
/// standard normals, one substream per sample).
DerivativeNormSamples derivative_norm_histogram(const Linearization& lin, Index m,
                                                std::size_t n_samples, std::uint64_t seed,
                                                std::size_t bins = 50);

struct MSweepRow {
  std::size_t m = 0;
  std::string scheme;  ///< "windowed" or "restarted"
  double worst_sigma = 0.0;
};

struct MSweepOptions {
  Box box;
  std::size_t n_inits = 50;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  double stop_tol = 1e-300;
  std::size_t tail_window = kDefaultTailWindow;
};

/// Worst (max) sigma_final over inits for each m and each of windowed/restarted AA(m).
/// Failed runs count as +inf.
std::vector<MSweepRow> m_sweep(const FixedPointProblem& problem, std::span<const std::size_t> m_values,
                               const MSweepOptions& opts);

}  // namespace anderson
