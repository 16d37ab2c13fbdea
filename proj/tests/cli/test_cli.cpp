#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <anderson/accelerators.hpp>
#include <anderson/error.hpp>

#include "anderson/cli/commands.hpp"
#include "anderson/cli/config.hpp"
#include "anderson/cli/output.hpp"

namespace fs = std::filesystem;
using namespace anderson;
using namespace anderson::cli;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("anderson_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Data rows (header comment and column row removed), split on commas.
std::vector<std::vector<std::string>> rows_of(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<std::string>> out;
  int n = 0;
  while (std::getline(in, line)) {
    if (n++ < 2) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

std::vector<std::string> header_of(const fs::path& p) {
  std::ifstream in(p);
  std::string comment, line;
  std::getline(in, comment);
  std::getline(in, line);
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) cells.push_back(cell);
  return cells;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Config, JsonThenFlagsOverride) {
  ExperimentConfig cfg;
  apply_json(cfg, R"({"problem": "scalar", "scheme": ["fp", "aa:2"], "m": "inf", "iters": 7,
                      "tol": 1e-9, "seed": 3, "inits": 5, "box": [0, 2], "x0": [1.5],
                      "samples": 9, "m_values": [1, 3], "svg": false})");
  EXPECT_EQ(cfg.problem_id, "scalar");
  EXPECT_EQ(cfg.schemes.size(), 2u);
  EXPECT_EQ(cfg.window_m, kUnboundedWindow);
  EXPECT_EQ(cfg.max_iters, 7u);
  EXPECT_EQ(cfg.box_hi, 2.0);
  EXPECT_FALSE(cfg.svg);
  apply_box(cfg, "0.5");
  EXPECT_EQ(cfg.box_lo, -0.5);
  const auto specs = resolve_schemes(cfg);
  EXPECT_EQ(specs[0].window_m, 0u);
  EXPECT_EQ(specs[1].window_m, 2u);
}

TEST(Config, Rejections) {
  ExperimentConfig cfg;
  EXPECT_EQ(kind_of([&] { apply_json(cfg, R"({"colour": 1})"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { apply_json(cfg, R"({"iters": "many"})"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { apply_json(cfg, "[1, 2]"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { parse_window("-1"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { apply_box(cfg, "1,2,3"); }), ErrorKind::ConfigError);
  ExperimentConfig bad;
  bad.n_inits = 0;
  EXPECT_EQ(kind_of([&] { validate(bad); }), ErrorKind::ConfigError);
  bad = ExperimentConfig{};
  bad.schemes = {"newton"};
  EXPECT_EQ(kind_of([&] { validate(bad); }), ErrorKind::ConfigError);
  bad = ExperimentConfig{};
  bad.stop_tol = 0.0;
  EXPECT_EQ(kind_of([&] { validate(bad); }), ErrorKind::ConfigError);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(Error(ErrorKind::ConfigError, "")), kExitConfig);
  EXPECT_EQ(exit_code_for(Error(ErrorKind::MissingJacobian, "")), kExitConfig);
  EXPECT_EQ(exit_code_for(Error(ErrorKind::NonFinite, "")), kExitNumerical);
  EXPECT_EQ(exit_code_for(Error(ErrorKind::EvalError, "")), kExitNumerical);
}

TEST(CsvWriter, NumberFormatting) {
  EXPECT_EQ(CsvWriter::num(0.5), "0.5");
  EXPECT_EQ(CsvWriter::num(std::nan("")), "");
  EXPECT_EQ(std::stod(CsvWriter::num(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(CmdRun, Linear2x2AcceleratedTrace) {
  ExperimentConfig cfg;
  cfg.output_dir = fresh_dir("run_aa");
  cfg.x0 = std::vector<double>{0.2, 0.1};
  std::ostringstream log;
  ASSERT_EQ(cmd_run(cfg, log), kExitOk);
  const auto header = header_of(cfg.output_dir / "trace.csv");
  const std::vector<std::string> expected{"k", "err_norm", "resid_norm", "sigma_k", "err_ratio", "beta_1"};
  EXPECT_EQ(header, expected);
  EXPECT_EQ(slurp(cfg.output_dir / "trace.csv").rfind("# anderson_lab trace v1\n", 0), 0u);
  const auto rows = rows_of(cfg.output_dir / "trace.csv");
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_LT(std::stod(rows[100][3]), 0.55);
  EXPECT_EQ(rows[0][3], "");  // sigma_0 undefined
  EXPECT_TRUE(fs::exists(cfg.output_dir / "trace.svg"));
}

TEST(CmdRun, ScalarBetaVanishes) {
  ExperimentConfig cfg;
  cfg.problem_id = "scalar";
  cfg.output_dir = fresh_dir("run_scalar");
  cfg.x0 = std::vector<double>{0.5};
  std::ostringstream log;
  ASSERT_EQ(cmd_run(cfg, log), kExitOk);
  for (const auto& row : rows_of(cfg.output_dir / "trace.csv")) {
    if (row.size() < 6 || row[5].empty()) continue;
    if (std::stod(row[1]) < 1e-8) {
      EXPECT_LT(std::abs(std::stod(row[5])), 1e-3);
    }
  }
}

TEST(CmdRun, StartAtFixedPoint) {
  ExperimentConfig cfg;
  cfg.schemes = {"fp"};
  cfg.output_dir = fresh_dir("run_fixed");
  cfg.x0 = std::vector<double>{0.0, 0.0};
  std::ostringstream log;
  ASSERT_EQ(cmd_run(cfg, log), kExitOk);
  EXPECT_EQ(rows_of(cfg.output_dir / "trace.csv").size(), 1u);
  EXPECT_NE(log.str().find("converged"), std::string::npos);
}

TEST(CmdRun, NeedsSingleInitialGuess) {
  ExperimentConfig cfg;
  cfg.output_dir = fresh_dir("run_nox0");
  std::ostringstream log;
  EXPECT_EQ(kind_of([&] { cmd_run(cfg, log); }), ErrorKind::ConfigError);
  cfg.box_lo = cfg.box_hi = 0.1;
  EXPECT_EQ(cmd_run(cfg, log), kExitOk);
}

TEST(CmdRun, GmresScheme) {
  ExperimentConfig cfg;
  cfg.schemes = {"gmres"};
  cfg.output_dir = fresh_dir("run_gmres");
  cfg.x0 = std::vector<double>{0.2, 0.1};
  cfg.stop_tol = 1e-14;
  std::ostringstream log;
  ASSERT_EQ(cmd_run(cfg, log), kExitOk);
  const auto header = header_of(cfg.output_dir / "trace.csv");
  EXPECT_EQ(header.size(), 5u);
  EXPECT_LE(rows_of(cfg.output_dir / "trace.csv").size(), 3u);
}

TEST(CmdSweep, SchemaAndDeterminism) {
  ExperimentConfig cfg;
  cfg.schemes = {"fp", "aa:1"};
  cfg.n_inits = 25;
  cfg.output_dir = fresh_dir("sweep_a");
  std::ostringstream log;
  ASSERT_EQ(cmd_sweep(cfg, log), kExitOk);
  const std::vector<std::string> expected{"init_id", "x0_0", "x0_1", "scheme", "m",
                                          "sigma_final", "sigma_tail_max", "converged"};
  EXPECT_EQ(header_of(cfg.output_dir / "sweep.csv"), expected);
  EXPECT_EQ(rows_of(cfg.output_dir / "sweep.csv").size(), 50u);
  const std::vector<std::string> hist{"scheme", "m", "bin_lo", "bin_hi", "count"};
  EXPECT_EQ(header_of(cfg.output_dir / "histogram.csv"), hist);

  ExperimentConfig again = cfg;
  again.output_dir = fresh_dir("sweep_b");
  ASSERT_EQ(cmd_sweep(again, log), kExitOk);
  EXPECT_EQ(slurp(cfg.output_dir / "sweep.csv"), slurp(again.output_dir / "sweep.csv"));
  EXPECT_EQ(slurp(cfg.output_dir / "histogram.csv"), slurp(again.output_dir / "histogram.csv"));
}

TEST(CmdSweep, LargeProblemUsesHash) {
  ExperimentConfig cfg;
  cfg.problem_id = "linear200";
  cfg.n_inits = 2;
  cfg.max_iters = 20;
  cfg.output_dir = fresh_dir("sweep_big");
  std::ostringstream log;
  ASSERT_EQ(cmd_sweep(cfg, log), kExitOk);
  EXPECT_EQ(header_of(cfg.output_dir / "sweep.csv")[1], "x0_hash");
}

TEST(CmdSweep, ZeroInitsIsConfigError) {
  ExperimentConfig cfg;
  cfg.n_inits = 0;
  cfg.output_dir = fresh_dir("sweep_zero");
  std::ostringstream log;
  EXPECT_EQ(kind_of([&] { cmd_sweep(cfg, log); }), ErrorKind::ConfigError);
}

TEST(CmdDerivHist, SingleSampleAndDeterminism) {
  ExperimentConfig cfg;
  cfg.samples = 1;
  cfg.output_dir = fresh_dir("deriv_one");
  std::ostringstream log;
  ASSERT_EQ(cmd_deriv_hist(cfg, log), kExitOk);
  const std::vector<std::string> expected{"sample_id", "norm"};
  EXPECT_EQ(header_of(cfg.output_dir / "derivnorms.csv"), expected);
  EXPECT_EQ(rows_of(cfg.output_dir / "derivnorms.csv").size(), 1u);

  cfg.samples = 500;
  cfg.seed = 7;
  cfg.output_dir = fresh_dir("deriv_a");
  ASSERT_EQ(cmd_deriv_hist(cfg, log), kExitOk);
  ExperimentConfig again = cfg;
  again.output_dir = fresh_dir("deriv_b");
  ASSERT_EQ(cmd_deriv_hist(again, log), kExitOk);
  EXPECT_EQ(slurp(cfg.output_dir / "derivnorms.csv"), slurp(again.output_dir / "derivnorms.csv"));
}

TEST(CmdMsweep, OneRowPerSchemeAndM) {
  ExperimentConfig cfg;
  cfg.problem_id = "linear200:-0.9,0.7,-0.7";
  cfg.m_values = {2};
  cfg.n_inits = 3;
  cfg.output_dir = fresh_dir("msweep");
  std::ostringstream log;
  ASSERT_EQ(cmd_msweep(cfg, log), kExitOk);
  const auto rows = rows_of(cfg.output_dir / "msweep.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], "windowed");
  EXPECT_EQ(rows[1][1], "restarted");
  const std::vector<std::string> expected{"m", "scheme", "worst_sigma"};
  EXPECT_EQ(header_of(cfg.output_dir / "msweep.csv"), expected);
}

TEST(CmdMsweep, NonAffineRejected) {
  ExperimentConfig cfg;
  cfg.problem_id = "nonlinear2x2";
  cfg.output_dir = fresh_dir("msweep_bad");
  std::ostringstream log;
  EXPECT_EQ(kind_of([&] { cmd_msweep(cfg, log); }), ErrorKind::ConfigError);
}

TEST(CmdGmresCompare, SolutionStartGivesEmptyTable) {
  ExperimentConfig cfg;
  cfg.x0 = std::vector<double>{0.0, 0.0};
  cfg.output_dir = fresh_dir("gmres_zero");
  std::ostringstream log;
  ASSERT_EQ(cmd_gmres_compare(cfg, log), kExitOk);
  EXPECT_TRUE(rows_of(cfg.output_dir / "gmres_deviation.csv").empty());
}

TEST(CmdGmresCompare, StagnationIsAFlag) {
  const fs::path dir = fresh_dir("gmres_stag");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "rot.json");
    out << R"({"M": [[1, -1], [1, 1]], "b": [1, 0]})";  // I - M is a 90 degree rotation
  }
  ExperimentConfig cfg;
  cfg.problem_id = "affine:" + (dir / "rot.json").string();
  cfg.x0 = std::vector<double>{0.0, 0.0};
  cfg.max_iters = 5;
  cfg.output_dir = dir / "out";
  std::ostringstream log;
  ASSERT_EQ(cmd_gmres_compare(cfg, log), kExitOk);
  const auto rows = rows_of(cfg.output_dir / "gmres_deviation.csv");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].back(), "1");
}

TEST(CmdGmresCompare, DeviationsSmallOnLinear200) {
  ExperimentConfig cfg;
  cfg.problem_id = "linear200";
  cfg.n_inits = 3;
  cfg.max_iters = 40;
  cfg.box_lo = -1.0;
  cfg.box_hi = 1.0;
  cfg.output_dir = fresh_dir("gmres_200");
  std::ostringstream log;
  ASSERT_EQ(cmd_gmres_compare(cfg, log), kExitOk);
  const auto rows = rows_of(cfg.output_dir / "gmres_deviation.csv");
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) {
    EXPECT_EQ(r[3], "0");
    EXPECT_LE(std::stod(r[2]), 1e-6);
  }
}
