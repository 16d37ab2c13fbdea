#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <anderson/error.hpp>

#include "anderson/cli/commands.hpp"
#include "anderson/cli/config.hpp"

namespace {

using anderson::cli::ExperimentConfig;

// Raw flag values; applied after the JSON config so that flags win.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> problem;
  std::optional<std::string> scheme;
  std::optional<std::string> m;
  std::optional<std::size_t> iters;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> inits;
  std::optional<std::string> box;
  std::optional<std::string> x0;
  std::optional<std::string> out;
  std::optional<std::size_t> samples;
  std::optional<std::string> m_values;
  std::optional<std::size_t> tail_window;
  std::optional<std::size_t> k_max;
  bool no_svg = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file; flags override its keys");
  cmd->add_option("--problem", f.problem,
                  "linear2x2 | nonlinear2x2 | scalar | linear200[:l2,l3,l4] | affine:<file>");
  cmd->add_option("--scheme", f.scheme, "fp | aa | aa_restarted | gmres; comma list, optional :m suffix");
  cmd->add_option("--m", f.m, "window size (integer or inf)");
  cmd->add_option("--iters", f.iters, "maximum iterations");
  cmd->add_option("--tol", f.tol, "stop once the residual norm is at or below this");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--inits", f.inits, "number of random initial guesses");
  cmd->add_option("--box", f.box, "initial-guess box: h for [-h,h] or lo,hi");
  cmd->add_option("--x0", f.x0, "explicit initial guess, comma separated");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--samples", f.samples, "number of random directions");
  cmd->add_option("--m-values", f.m_values, "window sizes for msweep, comma separated");
  cmd->add_option("--tail-window", f.tail_window, "iterations used for the tail max of sigma_k");
  cmd->add_option("--k-max", f.k_max, "steps compared against GMRES");
  cmd->add_flag("--no-svg", f.no_svg, "skip SVG output");
}

ExperimentConfig build_config(const Flags& f) {
  namespace cli = anderson::cli;
  ExperimentConfig cfg;
  if (f.config) cli::apply_json_file(cfg, *f.config);
  if (f.problem) cfg.problem_id = *f.problem;
  if (f.scheme) cfg.schemes = cli::split_list(*f.scheme);
  if (f.m) cfg.window_m = cli::parse_window(*f.m);
  if (f.iters) cfg.max_iters = *f.iters;
  if (f.tol) cfg.stop_tol = *f.tol;
  if (f.seed) cfg.seed = *f.seed;
  if (f.inits) cfg.n_inits = *f.inits;
  if (f.box) cli::apply_box(cfg, *f.box);
  if (f.x0) cfg.x0 = cli::parse_doubles(*f.x0);
  if (f.out) cfg.output_dir = *f.out;
  if (f.samples) cfg.samples = *f.samples;
  if (f.m_values) cfg.m_values = cli::parse_counts(*f.m_values);
  if (f.tail_window) cfg.tail_window = *f.tail_window;
  if (f.k_max) cfg.k_max = *f.k_max;
  if (f.no_svg) cfg.svg = false;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = anderson::cli;
  using Command = std::function<int(const ExperimentConfig&, std::ostream&)>;

  CLI::App app{"anderson_lab: Anderson acceleration experiments"};
  app.require_subcommand(1);

  Flags flags;
  const std::map<std::string, std::pair<std::string, Command>> commands{
      {"run", {"iterate one scheme from one initial guess; writes trace.csv", cli::cmd_run}},
      {"sweep", {"random initial guesses for each scheme; writes sweep.csv and histogram.csv", cli::cmd_sweep}},
      {"deriv-hist", {"norms of directional derivatives at the fixed point; writes derivnorms.csv",
                      cli::cmd_deriv_hist}},
      {"msweep", {"worst-case sigma over inits for each window size; writes msweep.csv", cli::cmd_msweep}},
      {"gmres-compare", {"full-window AA against GMRES; writes gmres_*.csv", cli::cmd_gmres_compare}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    add_flags(sub, flags);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  try {
    const ExperimentConfig cfg = build_config(flags);
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) return commands.at(name).second(cfg, std::cout);
    }
  } catch (const anderson::Error& e) {
    std::cerr << "anderson_lab: " << e.what() << '\n';
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "anderson_lab: " << e.what() << '\n';
    return cli::kExitNumerical;
  }
  return cli::kExitConfig;
}
