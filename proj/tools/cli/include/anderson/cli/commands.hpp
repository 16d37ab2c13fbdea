#pragma once

#include <ostream>

#include <anderson/error.hpp>

#include "anderson/cli/config.hpp"

namespace anderson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Exit code for an error escaping a command: configuration problems map to 2,
/// numerical failures to 3.
int exit_code_for(const Error& e);

/// Each command validates cfg, writes its files into cfg.output_dir and returns an
/// exit code. Configuration problems are thrown as Error(ConfigError).

/// trace.csv (+ trace.svg) for one trajectory. Returns 3 if the run diverged.
int cmd_run(const ExperimentConfig& cfg, std::ostream& log);
/// sweep.csv, histogram.csv (+ histogram.svg).
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& log);
/// derivnorms.csv, histogram.csv (+ derivnorms.svg).
int cmd_deriv_hist(const ExperimentConfig& cfg, std::ostream& log);
/// msweep.csv (+ msweep.svg).
int cmd_msweep(const ExperimentConfig& cfg, std::ostream& log);
/// gmres_sigma.csv, gmres_deviation.csv, gmres_summary.csv (+ gmres_sigma.svg).
int cmd_gmres_compare(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace anderson::cli
