#include "anderson/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include <anderson/anderson.hpp>

#include "anderson/cli/output.hpp"

namespace anderson::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

std::string num(double v) { return CsvWriter::num(v); }

void prepare_output(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) config_error("cannot create output directory " + cfg.output_dir.string());
}

std::filesystem::path out_path(const ExperimentConfig& cfg, const char* name) {
  return cfg.output_dir / name;
}

FixedPointProblem load_problem(const ExperimentConfig& cfg) { return problem_from_id(cfg.problem_id); }

const AffineSpec& require_affine(const FixedPointProblem& p) {
  if (!p.affine) config_error("problem '" + p.label + "' is not affine");
  return *p.affine;
}

std::string scheme_label(const SchemeSpec& s) { return std::string(to_string(s.scheme)); }

std::string window_label(const SchemeSpec& s) {
  return s.scheme == Scheme::FP ? "0" : format_window(s.window_m);
}

// FNV-1a over the raw coordinates; used to identify large initial guesses.
std::string x0_hash(const Vector& x) {
  std::uint64_t h = 1469598103934665603ULL;
  for (Index i = 0; i < x.size(); ++i) {
    unsigned char bytes[sizeof(double)];
    const double v = x(i);
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Vector single_x0(const ExperimentConfig& cfg, Index dim) {
  if (cfg.x0) {
    if (static_cast<Index>(cfg.x0->size()) != dim) {
      config_error("--x0 has " + std::to_string(cfg.x0->size()) + " entries, problem needs " +
                   std::to_string(dim));
    }
    return Eigen::Map<const Vector>(cfg.x0->data(), dim);
  }
  if (cfg.box_lo == cfg.box_hi) return Vector::Constant(dim, cfg.box_lo);
  config_error("run needs --x0 or a box collapsed to a point");
}

std::size_t finite_window(std::size_t m) {
  if (m == 0 || m == kUnboundedWindow) config_error("this command needs a finite window m >= 1");
  return m;
}

void write_histogram_rows(CsvWriter& csv, const std::string& scheme, const std::string& m,
                          const Histogram& h) {
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    csv.row({scheme, m, num(h.edges[i]), num(h.edges[i + 1]), std::to_string(h.counts[i])});
  }
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidProblem:
    case ErrorKind::InvalidArgument:
    case ErrorKind::MissingJacobian:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::vector<SchemeSpec> schemes = resolve_schemes(cfg);
  if (schemes.size() != 1) config_error("run takes exactly one scheme");
  const SchemeSpec& scheme = schemes.front();
  const FixedPointProblem problem = load_problem(cfg);
  const Vector x0 = single_x0(cfg, problem.dim);
  prepare_output(cfg);

  const IterationTrace trace = scheme.scheme == Scheme::GMRES
                                   ? gmres_run(require_affine(problem), x0, accel_config(cfg, scheme))
                                   : run_scheme(problem, x0, accel_config(cfg, scheme));

  std::size_t n_beta = 0;
  for (const BetaSolution& b : trace.betas) n_beta = std::max<std::size_t>(n_beta, b.beta.size());

  CsvWriter csv(out_path(cfg, "trace.csv"), "trace");
  std::vector<std::string> header{"k", "err_norm", "resid_norm", "sigma_k", "err_ratio"};
  for (std::size_t i = 1; i <= n_beta; ++i) header.push_back("beta_" + std::to_string(i));
  csv.row(header);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    std::vector<std::string> row{std::to_string(k),
                                 num(trace.has_errors() ? trace.error_norms[k] : nan),
                                 num(trace.residual_norms[k]),
                                 num(trace.has_errors() ? trace.sigma_k[k] : nan),
                                 num(trace.has_errors() ? trace.error_ratios[k] : nan)};
    const Vector* beta = k < trace.betas.size() ? &trace.betas[k].beta : nullptr;
    for (std::size_t i = 0; i < n_beta; ++i) {
      row.push_back(beta && static_cast<Index>(i) < beta->size() ? num((*beta)(static_cast<Index>(i)))
                                                                 : "");
    }
    csv.row(row);
  }

  if (cfg.svg) {
    svg::Panel sigma{"sigma_k", {}, false, nullptr};
    svg::Panel betas{"beta_k", {}, false, nullptr};
    if (trace.has_errors()) {
      svg::Series s{"sigma_k", {}, {}};
      for (std::size_t k = 1; k < trace.sigma_k.size(); ++k) {
        s.x.push_back(static_cast<double>(k));
        s.y.push_back(trace.sigma_k[k]);
      }
      sigma.series.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(n_beta, 6); ++i) {
      svg::Series s{"beta_" + std::to_string(i + 1), {}, {}};
      for (std::size_t k = 0; k < trace.betas.size(); ++k) {
        if (static_cast<Index>(i) < trace.betas[k].beta.size()) {
          s.x.push_back(static_cast<double>(k));
          s.y.push_back(trace.betas[k].beta(static_cast<Index>(i)));
        }
      }
      betas.series.push_back(std::move(s));
    }
    svg::write(out_path(cfg, "trace.svg"), {sigma, betas});
  }

  log << "run: " << problem.label << ' ' << scheme_label(scheme) << " m=" << window_label(scheme)
      << " iterations=" << trace.last_k() << " status=" << to_string(trace.status)
      << " resid=" << num(trace.residual_norms.back());
  if (trace.has_errors() && trace.last_k() > 0) log << " sigma=" << num(trace.sigma_k.back());
  log << '\n';
  return trace.status == RunStatus::Diverged ? kExitNumerical : kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::vector<SchemeSpec> specs = resolve_schemes(cfg);
  std::vector<AccelConfig> schemes;
  for (const SchemeSpec& s : specs) {
    if (s.scheme == Scheme::GMRES) config_error("gmres is available in run and gmres-compare only");
    schemes.push_back(accel_config(cfg, s));
  }
  const FixedPointProblem problem = load_problem(cfg);
  if (!problem.known_fixed_point) config_error("sweep needs a problem with a known fixed point");
  prepare_output(cfg);

  SweepOptions opts;
  opts.box = make_box(cfg, problem.dim);
  opts.n_inits = cfg.n_inits;
  opts.seed = cfg.seed;
  opts.tail_window = cfg.tail_window;
  opts.margin = cfg.margin;
  opts.bins = cfg.bins;
  const SweepReport report = monte_carlo_sweep(problem, schemes, opts);

  CsvWriter csv(out_path(cfg, "sweep.csv"), "sweep");
  const bool small = problem.dim <= 4;
  std::vector<std::string> header{"init_id"};
  if (small) {
    for (Index i = 0; i < problem.dim; ++i) header.push_back("x0_" + std::to_string(i));
  } else {
    header.push_back("x0_hash");
  }
  for (const char* h : {"scheme", "m", "sigma_final", "sigma_tail_max", "converged"}) header.push_back(h);
  csv.row(header);

  for (const InitResult& r : report.per_init) {
    std::vector<std::string> row{std::to_string(r.init_id)};
    if (small) {
      for (Index i = 0; i < r.x0.size(); ++i) row.push_back(num(r.x0(i)));
    } else {
      row.push_back(x0_hash(r.x0));
    }
    row.push_back(scheme_label(specs[r.scheme_index]));
    row.push_back(window_label(specs[r.scheme_index]));
    row.push_back(r.estimate ? num(r.estimate->sigma_final) : "");
    row.push_back(r.estimate ? num(r.estimate->sigma_tail_max) : "");
    row.push_back(r.estimate && r.estimate->converged ? "1" : "0");
    csv.row(row);
  }

  CsvWriter hist(out_path(cfg, "histogram.csv"), "histogram");
  hist.row({"scheme", "m", "bin_lo", "bin_hi", "count"});
  std::vector<svg::Panel> panels;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    write_histogram_rows(hist, scheme_label(specs[s]), window_label(specs[s]), report.histograms[s]);
    panels.push_back({"sigma_final: " + scheme_label(specs[s]) + " m=" + window_label(specs[s]), {},
                      false, &report.histograms[s]});

    const std::vector<double> sig = report.sigma_finals(s);
    const auto [lo, hi] = std::minmax_element(sig.begin(), sig.end());
    const auto failed = std::count_if(sig.begin(), sig.end(), [](double v) { return !std::isfinite(v); });
    log << "sweep: " << scheme_label(specs[s]) << " m=" << window_label(specs[s])
        << " sigma_final min=" << num(*lo) << " max=" << num(*hi) << " failed=" << failed;
    if (report.rho) log << " s_fraction=" << num(report.s_fraction[s]);
    log << '\n';
  }
  if (cfg.svg) svg::write(out_path(cfg, "histogram.svg"), panels);
  return kExitOk;
}

int cmd_deriv_hist(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  const FixedPointProblem problem = load_problem(cfg);
  const Index m = static_cast<Index>(finite_window(cfg.window_m));
  const Linearization lin = linearize_at_fixed_point(problem);
  prepare_output(cfg);

  const DerivativeNormSamples samples = derivative_norm_histogram(lin, m, cfg.samples, cfg.seed, cfg.bins);

  CsvWriter csv(out_path(cfg, "derivnorms.csv"), "derivnorms");
  csv.row({"sample_id", "norm"});
  for (std::size_t i = 0; i < samples.norms.size(); ++i) {
    csv.row({std::to_string(i), num(samples.norms[i])});
  }
  CsvWriter hist(out_path(cfg, "histogram.csv"), "histogram");
  hist.row({"scheme", "m", "bin_lo", "bin_hi", "count"});
  write_histogram_rows(hist, "deriv", std::to_string(m), samples.histogram);
  if (cfg.svg) {
    svg::write(out_path(cfg, "derivnorms.svg"),
               {{"norm of directional derivative", {}, false, &samples.histogram}});
  }

  const double max_norm = *std::max_element(samples.norms.begin(), samples.norms.end());
  const auto above_one =
      std::count_if(samples.norms.begin(), samples.norms.end(), [](double v) { return v > 1.0; });
  log << "deriv-hist: " << problem.label << " m=" << m << " samples=" << samples.norms.size()
      << " max_norm=" << num(max_norm) << " above_one=" << above_one
      << " rank_deficient=" << samples.rank_deficient << '\n';
  return kExitOk;
}

int cmd_msweep(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  const FixedPointProblem problem = load_problem(cfg);
  require_affine(problem);
  prepare_output(cfg);

  MSweepOptions opts;
  opts.box = make_box(cfg, problem.dim);
  opts.n_inits = cfg.n_inits;
  opts.seed = cfg.seed;
  opts.max_iters = cfg.max_iters;
  opts.stop_tol = cfg.stop_tol;
  opts.tail_window = cfg.tail_window;
  const std::vector<MSweepRow> rows = m_sweep(problem, cfg.m_values, opts);

  CsvWriter csv(out_path(cfg, "msweep.csv"), "msweep");
  csv.row({"m", "scheme", "worst_sigma"});
  svg::Series windowed{"windowed", {}, {}};
  svg::Series restarted{"restarted", {}, {}};
  for (const MSweepRow& r : rows) {
    csv.row({std::to_string(r.m), r.scheme, num(r.worst_sigma)});
    svg::Series& s = r.scheme == "windowed" ? windowed : restarted;
    s.x.push_back(static_cast<double>(r.m));
    s.y.push_back(r.worst_sigma);
    log << "msweep: m=" << r.m << ' ' << r.scheme << " worst_sigma=" << num(r.worst_sigma) << '\n';
  }
  if (cfg.svg) {
    svg::write(out_path(cfg, "msweep.svg"), {{"worst-case sigma vs m", {windowed, restarted}, false, nullptr}});
  }
  return kExitOk;
}

int cmd_gmres_compare(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  std::vector<SchemeSpec> specs = resolve_schemes(cfg);
  for (const SchemeSpec& s : specs) {
    if (s.scheme == Scheme::GMRES) config_error("gmres-compare runs GMRES itself; list AA schemes only");
  }
  const bool has_full = std::any_of(specs.begin(), specs.end(), [](const SchemeSpec& s) {
    return s.scheme == Scheme::AA && s.window_m == kUnboundedWindow;
  });
  if (!has_full) specs.push_back({Scheme::AA, kUnboundedWindow});

  const FixedPointProblem problem = load_problem(cfg);
  const AffineSpec& spec = require_affine(problem);
  prepare_output(cfg);

  std::vector<Vector> inits;
  if (cfg.x0 || cfg.box_lo == cfg.box_hi) {
    inits.push_back(single_x0(cfg, problem.dim));
  } else {
    const Box box = make_box(cfg, problem.dim);
    for (std::size_t i = 0; i < cfg.n_inits; ++i) inits.push_back(sample_in_box(box, cfg.seed, i));
  }

  struct InitOutcome {
    std::vector<IterationTrace> traces;
    std::vector<std::optional<RFactorEstimate>> estimates;
    std::vector<std::string> run_failures;
    GmresComparison comparison;
    bool stagnated = false;
  };
  std::vector<InitOutcome> outcomes(inits.size());

  parallel_for(inits.size(), [&](std::size_t i) {
    InitOutcome& out = outcomes[i];
    for (const SchemeSpec& s : specs) {
      IterationTrace trace;
      std::optional<RFactorEstimate> est;
      std::string failure;
      try {
        trace = run_scheme(problem, inits[i], accel_config(cfg, s));
        est = estimate_r_factor(trace, cfg.tail_window);
      } catch (const Error& e) {
        failure = e.what();
      }
      out.traces.push_back(std::move(trace));
      out.estimates.push_back(est);
      out.run_failures.push_back(std::move(failure));
    }
    try {
      out.comparison = aa_full_window_vs_gmres_check(spec, inits[i], cfg.k_max);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StagnationDetected) throw;
      out.stagnated = true;
    }
  });

  CsvWriter sigma_csv(out_path(cfg, "gmres_sigma.csv"), "gmres_sigma");
  sigma_csv.row({"init_id", "scheme", "m", "k", "sigma_k"});
  CsvWriter dev_csv(out_path(cfg, "gmres_deviation.csv"), "gmres_deviation");
  dev_csv.row({"init_id", "k", "deviation", "stagnated"});
  CsvWriter sum_csv(out_path(cfg, "gmres_summary.csv"), "gmres_summary");
  sum_csv.row({"init_id", "scheme", "m", "sigma_final", "max_deviation", "stagnated"});

  std::vector<svg::Series> full_series;
  double worst_dev = 0.0;
  std::size_t n_stagnated = 0;
  for (std::size_t i = 0; i < inits.size(); ++i) {
    const InitOutcome& out = outcomes[i];
    const std::string id = std::to_string(i);
    const std::string stag = out.stagnated ? "1" : "0";
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const IterationTrace& t = out.traces[s];
      for (std::size_t k = 1; k < t.sigma_k.size(); ++k) {
        sigma_csv.row({id, scheme_label(specs[s]), window_label(specs[s]), std::to_string(k), num(t.sigma_k[k])});
      }
      sum_csv.row({id, scheme_label(specs[s]), window_label(specs[s]),
                   out.estimates[s] ? num(out.estimates[s]->sigma_final) : "",
                   out.stagnated ? "" : num(out.comparison.max_deviation), stag});
      if (specs[s].window_m == kUnboundedWindow && full_series.size() < 20 && t.has_errors()) {
        svg::Series series{"", {}, {}};
        for (std::size_t k = 1; k < t.sigma_k.size(); ++k) {
          if (!(t.error_norms[k] > kErrorFloor)) break;
          series.x.push_back(static_cast<double>(k));
          series.y.push_back(t.sigma_k[k]);
        }
        full_series.push_back(std::move(series));
      }
    }
    if (out.stagnated) {
      ++n_stagnated;
      dev_csv.row({id, "", "", "1"});
    } else {
      for (std::size_t k = 0; k < out.comparison.deviations.size(); ++k) {
        dev_csv.row({id, std::to_string(k), num(out.comparison.deviations[k]), "0"});
      }
      worst_dev = std::max(worst_dev, out.comparison.max_deviation);
    }
  }
  if (cfg.svg) {
    svg::write(out_path(cfg, "gmres_sigma.svg"), {{"sigma_k of AA(inf) per init", full_series, false, nullptr}});
  }
  log << "gmres-compare: " << problem.label << " inits=" << inits.size() << " max_deviation=" << num(worst_dev)
      << " stagnated=" << n_stagnated << '\n';
  return kExitOk;
}

}  // namespace anderson::cli
