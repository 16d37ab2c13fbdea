#include "anderson/cli/config.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include <anderson/error.hpp>

namespace anderson::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

double parse_double(std::string_view text) {
  const std::string s(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error("not a number: '" + s + "'");
  }
}

std::size_t parse_count(std::string_view text) {
  const std::string s(text);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    config_error("not a non-negative integer: '" + s + "'");
  }
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (const std::exception&) {
    config_error("integer out of range: '" + s + "'");
  }
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::FP: return "fp";
    case Scheme::AA: return "aa";
    case Scheme::AARestarted: return "aa_restarted";
    case Scheme::GMRES: return "gmres";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "fp") return Scheme::FP;
  if (text == "aa") return Scheme::AA;
  if (text == "aa_restarted") return Scheme::AARestarted;
  if (text == "gmres") return Scheme::GMRES;
  config_error("unknown scheme '" + std::string(text) + "' (fp|aa|aa_restarted|gmres)");
}

std::size_t parse_window(std::string_view text) {
  if (text == "inf") return kUnboundedWindow;
  return parse_count(text);
}

std::string format_window(std::size_t m) {
  return m == kUnboundedWindow ? "inf" : std::to_string(m);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  for (const std::string& s : split_list(text)) out.push_back(parse_double(s));
  return out;
}

std::vector<std::size_t> parse_counts(std::string_view text) {
  std::vector<std::size_t> out;
  for (const std::string& s : split_list(text)) out.push_back(parse_count(s));
  return out;
}

void apply_box(ExperimentConfig& cfg, std::string_view text) {
  const std::vector<double> v = parse_doubles(text);
  if (v.size() == 1) {
    cfg.box_lo = -v[0];
    cfg.box_hi = v[0];
  } else if (v.size() == 2) {
    cfg.box_lo = v[0];
    cfg.box_hi = v[1];
  } else {
    config_error("--box expects 'h' or 'lo,hi'");
  }
}

void apply_json(ExperimentConfig& cfg, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("config JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("config JSON must be an object");

  auto window_of = [](const nlohmann::json& v) -> std::size_t {
    if (v.is_string()) return parse_window(v.get<std::string>());
    return v.get<std::size_t>();
  };

  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "problem") {
        cfg.problem_id = v.get<std::string>();
      } else if (key == "scheme") {
        cfg.schemes = v.is_array() ? v.get<std::vector<std::string>>()
                                   : split_list(v.get<std::string>());
      } else if (key == "m") {
        cfg.window_m = window_of(v);
      } else if (key == "iters") {
        cfg.max_iters = v.get<std::size_t>();
      } else if (key == "tol") {
        cfg.stop_tol = v.get<double>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "inits") {
        cfg.n_inits = v.get<std::size_t>();
      } else if (key == "box") {
        if (v.is_number()) {
          cfg.box_lo = -v.get<double>();
          cfg.box_hi = v.get<double>();
        } else {
          const auto b = v.get<std::vector<double>>();
          if (b.size() != 2) config_error("\"box\" must be a number or [lo, hi]");
          cfg.box_lo = b[0];
          cfg.box_hi = b[1];
        }
      } else if (key == "x0") {
        cfg.x0 = v.get<std::vector<double>>();
      } else if (key == "out") {
        cfg.output_dir = v.get<std::string>();
      } else if (key == "samples") {
        cfg.samples = v.get<std::size_t>();
      } else if (key == "m_values") {
        cfg.m_values = v.get<std::vector<std::size_t>>();
      } else if (key == "tail_window") {
        cfg.tail_window = v.get<std::size_t>();
      } else if (key == "margin") {
        cfg.margin = v.get<double>();
      } else if (key == "bins") {
        cfg.bins = v.get<std::size_t>();
      } else if (key == "k_max") {
        cfg.k_max = v.get<std::size_t>();
      } else if (key == "svg") {
        cfg.svg = v.get<bool>();
      } else {
        config_error("unknown config key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("config JSON: ") + e.what());
  }
}

void apply_json_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  apply_json(cfg, buf.str());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.problem_id.empty()) config_error("problem id is empty");
  if (cfg.schemes.empty()) config_error("no scheme given");
  for (const SchemeSpec& s : resolve_schemes(cfg)) (void)s;
  if (cfg.max_iters < 1) config_error("iters must be >= 1");
  if (!(cfg.stop_tol > 0.0)) config_error("tol must be > 0");
  if (cfg.n_inits < 1) config_error("inits must be >= 1");
  if (!(cfg.box_lo <= cfg.box_hi)) config_error("box needs lo <= hi");
  if (cfg.samples < 1) config_error("samples must be >= 1");
  if (cfg.m_values.empty()) config_error("m_values is empty");
  for (std::size_t m : cfg.m_values) {
    if (m < 1) config_error("m_values entries must be >= 1");
  }
  if (cfg.tail_window < 1) config_error("tail_window must be >= 1");
  if (cfg.bins < 1) config_error("bins must be >= 1");
  if (cfg.k_max < 1) config_error("k_max must be >= 1");
}

std::vector<SchemeSpec> resolve_schemes(const ExperimentConfig& cfg) {
  std::vector<SchemeSpec> out;
  for (const std::string& token : cfg.schemes) {
    SchemeSpec s;
    const auto colon = token.find(':');
    s.scheme = parse_scheme(std::string_view(token).substr(0, colon));
    s.window_m = colon == std::string::npos ? cfg.window_m
                                            : parse_window(std::string_view(token).substr(colon + 1));
    if (s.scheme == Scheme::FP) s.window_m = 0;
    if (s.scheme == Scheme::AARestarted && s.window_m == kUnboundedWindow) {
      config_error("aa_restarted needs a finite window");
    }
    out.push_back(s);
  }
  return out;
}

AccelConfig accel_config(const ExperimentConfig& cfg, const SchemeSpec& s) {
  AccelConfig a;
  a.window_m = s.window_m;
  a.restart = s.scheme == Scheme::AARestarted;
  a.max_iters = cfg.max_iters;
  a.stop_tol = cfg.stop_tol;
  return a;
}

Box make_box(const ExperimentConfig& cfg, Index dim) {
  return {Vector::Constant(dim, cfg.box_lo), Vector::Constant(dim, cfg.box_hi)};
}

}  // namespace anderson::cli
