#include "anderson/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anderson/error.hpp"
#include "anderson/parallel.hpp"

namespace anderson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCauchyTol = 1e-3;

}  // namespace

RFactorEstimate estimate_r_factor(const IterationTrace& trace, std::size_t tail_window) {
  if (!trace.has_errors()) {
    throw Error(ErrorKind::InsufficientData, "trace has no error norms (fixed point unknown)");
  }
  if (tail_window == 0) throw Error(ErrorKind::InvalidArgument, "tail_window must be >= 1");

  const double floor = kErrorFloor * (1.0 + trace.fixed_point_norm.value_or(0.0));
  std::size_t last = 0;
  bool hit_floor = false;
  for (std::size_t k = 1; k < trace.error_norms.size(); ++k) {
    const double e = trace.error_norms[k];
    if (!std::isfinite(e) || e <= floor) {
      hit_floor = std::isfinite(e);
      break;
    }
    last = k;
  }
  if (last == 0) {
    throw Error(ErrorKind::InsufficientData, "no usable iterations above the error floor");
  }

  RFactorEstimate est;
  est.k_used = last;
  est.sigma_final = trace.sigma_k[last];
  const std::size_t first = last >= tail_window ? last - tail_window + 1 : 1;
  const auto tail_begin = trace.sigma_k.begin() + static_cast<std::ptrdiff_t>(first);
  const auto tail_end = trace.sigma_k.begin() + static_cast<std::ptrdiff_t>(last + 1);
  const auto [lo, hi] = std::minmax_element(tail_begin, tail_end);
  est.sigma_tail_max = *hi;

  const bool diverged = trace.status == RunStatus::Diverged;
  est.converged = !diverged && (trace.status == RunStatus::Converged || hit_floor ||
                                (*hi - *lo) <= kCauchyTol);
  return est;
}

Box Box::cube(Index n, double half_width) {
  if (n < 1 || !(half_width >= 0.0)) throw Error(ErrorKind::InvalidArgument, "bad box");
  return {Vector::Constant(n, -half_width), Vector::Constant(n, half_width)};
}

Box Box::point(const Vector& x) { return {x, x}; }

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
  return std::mt19937_64(seq);
}

Vector sample_in_box(const Box& box, std::uint64_t seed, std::uint64_t init_id) {
  std::mt19937_64 rng = substream(seed, init_id);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(box.dim());
  for (Index i = 0; i < x.size(); ++i) {
    x(i) = box.lower(i) + unit(rng) * (box.upper(i) - box.lower(i));
  }
  return x;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw Error(ErrorKind::InvalidArgument, "bad histogram range");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    std::size_t bin = bins - 1;
    if (!std::isnan(v) && v < hi) {
      const double pos = std::floor((v - lo) / width);
      bin = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
    }
    ++h.counts[bin];
  }
  return h;
}

std::vector<double> SweepReport::sigma_finals(std::size_t scheme_index) const {
  std::vector<double> out;
  const std::size_t n_inits = schemes.empty() ? 0 : per_init.size() / schemes.size();
  out.reserve(n_inits);
  for (std::size_t i = 0; i < n_inits; ++i) {
    const InitResult& r = at(i, scheme_index);
    out.push_back(r.estimate ? r.estimate->sigma_final : kInf);
  }
  return out;
}

double s_fraction(std::span<const double> sigma_finals, double rho, double margin) {
  if (sigma_finals.empty()) return 0.0;
  const auto below = std::count_if(sigma_finals.begin(), sigma_finals.end(),
                                   [&](double s) { return s < rho - margin; });
  return static_cast<double>(below) / static_cast<double>(sigma_finals.size());
}

SweepReport monte_carlo_sweep(const FixedPointProblem& problem, std::span<const AccelConfig> schemes,
                              const SweepOptions& opts) {
  if (opts.n_inits == 0) throw Error(ErrorKind::InvalidArgument, "n_inits must be >= 1");
  if (schemes.empty()) throw Error(ErrorKind::InvalidArgument, "no schemes given");
  if (opts.box.dim() != problem.dim || opts.box.upper.size() != problem.dim) {
    throw Error(ErrorKind::InvalidArgument, "box dimension does not match problem");
  }
  for (const AccelConfig& cfg : schemes) validate(cfg);

  SweepReport report;
  report.schemes.assign(schemes.begin(), schemes.end());
  report.seed = opts.seed;
  const std::size_t n_schemes = schemes.size();
  report.per_init.resize(opts.n_inits * n_schemes);

  parallel_for(opts.n_inits * n_schemes, [&](std::size_t task) {
    const std::size_t init_id = task / n_schemes;
    const std::size_t scheme_index = task % n_schemes;
    InitResult& out = report.per_init[task];
    out.init_id = init_id;
    out.scheme_index = scheme_index;
    out.x0 = sample_in_box(opts.box, opts.seed, init_id);
    try {
      const IterationTrace trace = run_scheme(problem, out.x0, schemes[scheme_index]);
      out.status = trace.status;
      out.estimate = estimate_r_factor(trace, opts.tail_window);
    } catch (const Error& e) {
      out.failure = e.what();
    }
  });

  if (problem.jacobian && problem.known_fixed_point) {
    report.rho = spectral_radius((*problem.jacobian)(*problem.known_fixed_point));
  }

  double hi = 1.0;
  for (const InitResult& r : report.per_init) {
    if (r.estimate && std::isfinite(r.estimate->sigma_final)) {
      hi = std::max(hi, r.estimate->sigma_final);
    }
  }
  report.hist_hi = hi;
  for (std::size_t s = 0; s < n_schemes; ++s) {
    const std::vector<double> sig = report.sigma_finals(s);
    report.histograms.push_back(make_histogram(sig, opts.bins, 0.0, hi));
    report.s_fraction.push_back(report.rho ? s_fraction(sig, *report.rho, opts.margin)
                                           : std::numeric_limits<double>::quiet_NaN());
  }
  return report;
}

DerivativeNormSamples derivative_norm_histogram(const Linearization& lin, Index m,
                                                std::size_t n_samples, std::uint64_t seed,
                                                std::size_t bins) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "window must be >= 1");
  const Index n = lin.M.rows();
  DerivativeNormSamples out;
  out.norms.assign(n_samples, 0.0);
  std::vector<char> deficient(n_samples, 0);

  parallel_for(n_samples, [&](std::size_t id) {
    std::mt19937_64 rng = substream(seed, id);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n * (m + 1));
    do {
      for (Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    } while (v.norm() == 0.0);
    const Direction d = Direction::unit(std::move(v), n);
    const DirectionalDerivativeResult res = directional_derivative(lin, d);
    out.norms[id] = res.value.norm();
    deficient[id] = res.formula_rank_ok ? 0 : 1;
  });

  out.rank_deficient = static_cast<std::size_t>(std::count(deficient.begin(), deficient.end(), 1));
  double hi = 0.0;
  for (double v : out.norms) hi = std::max(hi, v);
  out.histogram = make_histogram(out.norms, bins, 0.0, hi > 0.0 ? hi : 1.0);
  return out;
}

std::vector<MSweepRow> m_sweep(const FixedPointProblem& problem, std::span<const std::size_t> m_values,
                               const MSweepOptions& opts) {
  if (m_values.empty()) throw Error(ErrorKind::InvalidArgument, "no window sizes given");
  std::vector<AccelConfig> schemes;
  for (std::size_t m : m_values) {
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "m-sweep window sizes must be >= 1");
    for (bool restart : {false, true}) {
      AccelConfig cfg;
      cfg.window_m = m;
      cfg.restart = restart;
      cfg.max_iters = opts.max_iters;
      cfg.stop_tol = opts.stop_tol;
      schemes.push_back(cfg);
    }
  }

  SweepOptions sweep_opts;
  sweep_opts.box = opts.box;
  sweep_opts.n_inits = opts.n_inits;
  sweep_opts.seed = opts.seed;
  sweep_opts.tail_window = opts.tail_window;
  const SweepReport report = monte_carlo_sweep(problem, schemes, sweep_opts);

  std::vector<MSweepRow> rows;
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    const std::vector<double> sig = report.sigma_finals(s);
    rows.push_back({schemes[s].window_m, schemes[s].restart ? "restarted" : "windowed",
                    *std::max_element(sig.begin(), sig.end())});
  }
  return rows;
}

}  // namespace anderson
