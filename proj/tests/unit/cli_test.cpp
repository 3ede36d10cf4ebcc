#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fastfix/cli/commands.hpp"
#include "fastfix/cli/config.hpp"
#include "fastfix/error.hpp"

namespace fastfix::cli {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("fastfix_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error_key(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "";
}

TEST(Config, EmptyDocumentGivesDefaults) {
  const auto c = parse_config_text("");
  EXPECT_EQ(c, RunConfig{});
  EXPECT_EQ(parse_config_text("  {}  "), RunConfig{});
  EXPECT_EQ(c.train.schedule.l, 64u);
  EXPECT_EQ(c.train.schedule.u, 448u);
  EXPECT_DOUBLE_EQ(c.train.tau, 0.95);
  EXPECT_DOUBLE_EQ(c.train.schedule.alpha, 0.7);
}

TEST(Config, ErrorsCarryKeyPath) {
  EXPECT_EQ(config_error_key(R"({"schedule": {"alpha": 1.5}})"), "schedule.alpha");
  EXPECT_EQ(config_error_key(R"({"schedule": {"alpah": 0.5}})"), "schedule.alpah");
  EXPECT_EQ(config_error_key(R"({"threshold": {"tau": "high"}})"), "threshold.tau");
  EXPECT_EQ(config_error_key(R"({"threshold": {"tau": 1.2}})"), "threshold.tau");
  EXPECT_EQ(config_error_key(R"({"model": {"widths": []}})"), "model.widths");
  EXPECT_THROW(parse_config_text("{not json"), ConfigError);
}

TEST(Config, RoundTripThroughJson) {
  auto c = parse_config_text(R"({"seed": 42, "schedule": {"cbs_enabled": true, "alpha": 0.5},
                                 "threshold": {"cpl_enabled": true},
                                 "data": {"synthetic": {"height": 8, "width": 8}}})");
  EXPECT_EQ(c.train.seed, 42u);
  EXPECT_EQ(c.federated.seed, 42u);
  EXPECT_TRUE(c.train.schedule.cbs_enabled);
  const auto back = parse_config_text(to_json(c).dump());
  EXPECT_EQ(back, c);
}

TEST(Config, MissingDataPathFailsValidation) {
  EXPECT_EQ(config_error_key(R"({"data": {"source": "cifar10", "path": "/nonexistent/dir"}})"),
            "data.path");
  auto c = parse_config_text("");
  c.data.source = DataSource::file;
  c.data.path = "/nonexistent/train.ffds";
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, EnvironmentOverridesOutputDir) {
  auto c = parse_config_text("");
  ::setenv(kOutputDirEnv, "/tmp/elsewhere", 1);
  apply_env_overrides(c);
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(c.output_dir, "/tmp/elsewhere");
}

TEST(Schedule, CsvEndsAtFullBatch) {
  ScheduleConfig s;
  s.mu = 0;
  s.T = 1024;
  s.cbs_enabled = true;
  std::ostringstream out;
  write_schedule_csv(out, s, 0.03);
  std::istringstream in(out.str());
  std::string line, first, last;
  std::size_t rows = 0;
  std::getline(in, first);
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(first, "t,u_t,lambda_t,lr_t");
  EXPECT_EQ(rows, 1025u);
  EXPECT_EQ(last.rfind("1024,448,7,", 0), 0u) << last;
}

RunConfig tiny_run(const fs::path& dir) {
  auto c = parse_config_text(R"({
    "seed": 3,
    "data": {"n_labeled": 20, "synthetic": {"train_count": 200, "test_count": 50,
             "height": 8, "width": 8}},
    "schedule": {"l": 4, "mu": 2, "u": 8, "T": 8, "cbs_enabled": true},
    "threshold": {"cpl_enabled": true},
    "model": {"widths": [4, 8]},
    "train": {"eval_every": 4, "target_accuracy": 0.05}
  })");
  c.output_dir = dir.string();
  return c;
}

TEST(Commands, AnalyzeReproducesSummary) {
  const auto dir = scratch("analyze");
  std::ostringstream log;
  command_train(tiny_run(dir), log);
  const auto summary = slurp(dir / "summary.csv");
  const auto s = analyze_stream(dir / "metrics.jsonl", dir / "run_config.json");
  std::ostringstream again;
  write_summary_header(again);
  write_summary_row(again, s);
  EXPECT_EQ(again.str(), summary);
  EXPECT_TRUE(fs::exists(dir / "utilization_curve.csv"));
  EXPECT_TRUE(fs::exists(dir / "model.ffml"));
}

TEST(Commands, TrainOutputsAreByteIdentical) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  std::ostringstream log;
  command_train(tiny_run(a), log);
  command_train(tiny_run(b), log);
  EXPECT_EQ(slurp(a / "metrics.jsonl"), slurp(b / "metrics.jsonl"));
  EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
  EXPECT_EQ(slurp(a / "model.ffml"), slurp(b / "model.ffml"));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FASTFIX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Binary, ExitCodes) {
  const auto dir = scratch("exit");
  EXPECT_EQ(run_cli("schedule --T 16"), 0);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("schedule --alpha 1.5"), 2);
  {
    std::ofstream(dir / "bad.json") << R"({"schedule": {"bogus": 1}})";
  }
  EXPECT_EQ(run_cli("train -c " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(run_cli("analyze " + (dir / "missing.jsonl").string()), 2);
  {
    std::ofstream(dir / "m.jsonl") << "{}\n";
  }
  EXPECT_EQ(run_cli("analyze " + (dir / "m.jsonl").string()), 1);
}

}  // namespace
}  // namespace fastfix::cli
