#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <anderson/accelerators.hpp>
#include <anderson/analysis.hpp>

namespace anderson::cli {

enum class Scheme { FP, AA, AARestarted, GMRES };

std::string_view to_string(Scheme s);
/// Accepts "fp", "aa", "aa_restarted", "gmres". Throws Error(ConfigError) otherwise.
Scheme parse_scheme(std::string_view text);

/// One scheme entry of a sweep: "aa" takes the window from ExperimentConfig::window_m,
/// "aa:3" or "aa:inf" fixes it.
struct SchemeSpec {
  Scheme scheme = Scheme::AA;
  std::size_t window_m = 1;
};

struct ExperimentConfig {
  std::string problem_id = "linear2x2";
  std::vector<std::string> schemes{"aa"};
  std::size_t window_m = 1;
  std::size_t max_iters = 100;
  /// Tiny by default so runs use the whole iteration budget.
  double stop_tol = 1e-300;
  std::uint64_t seed = 42;
  std::size_t n_inits = 100;
  /// Initial guesses are drawn from [box_lo, box_hi] in every coordinate.
  double box_lo = -0.25;
  double box_hi = 0.25;
  std::optional<std::vector<double>> x0;
  std::filesystem::path output_dir = ".";
  std::size_t samples = 100000;
  std::vector<std::size_t> m_values{1, 2, 3, 4, 5, 6, 7, 8};
  std::size_t tail_window = kDefaultTailWindow;
  double margin = kDefaultSMargin;
  std::size_t bins = 50;
  std::size_t k_max = 10;
  bool svg = true;
};

/// Parses a window size: a non-negative integer or "inf".
std::size_t parse_window(std::string_view text);
std::string format_window(std::size_t m);

/// Overlays keys of a JSON object onto cfg. Unknown keys are a ConfigError.
void apply_json(ExperimentConfig& cfg, std::string_view json_text);
void apply_json_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// "h" -> [-h, h]; "lo,hi" -> [lo, hi].
void apply_box(ExperimentConfig& cfg, std::string_view text);

std::vector<double> parse_doubles(std::string_view text);
std::vector<std::size_t> parse_counts(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

/// Field checks shared by all commands. Throws Error(ConfigError).
void validate(const ExperimentConfig& cfg);

std::vector<SchemeSpec> resolve_schemes(const ExperimentConfig& cfg);
AccelConfig accel_config(const ExperimentConfig& cfg, const SchemeSpec& s);
Box make_box(const ExperimentConfig& cfg, Index dim);

}  // namespace anderson::cli
