#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fastfix/cli/commands.hpp"
#include "fastfix/cli/config.hpp"
#include "fastfix/error.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRunError = 1;
constexpr int kConfigError = 2;

fastfix::cli::RunConfig load(const std::string& path) {
  auto cfg = path.empty() ? fastfix::cli::parse_config_text("")
                          : fastfix::cli::parse_config(path);
  fastfix::cli::apply_env_overrides(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fastfix;

  CLI::App app{"Semi-supervised training with curriculum batch size and pseudo labeling"};
  app.require_subcommand(1);

  std::string config_path;
  auto* train = app.add_subcommand("train", "Centralised training run");
  auto* federated = app.add_subcommand("federated", "Federated simulation");
  auto* stream = app.add_subcommand("stream", "Streaming run with a growing unlabeled pool");
  for (auto* sub : {train, federated, stream}) {
    sub->add_option("-c,--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  }

  ScheduleConfig sched;
  sched.cbs_enabled = true;
  sched.T = 1024;
  double lr0 = 0.03;
  bool flat = false;
  auto* schedule = app.add_subcommand("schedule", "Print the u_t / lambda / lr schedule as CSV");
  schedule->add_option("--alpha", sched.alpha, "Curve shape in [0, 1)")->capture_default_str();
  schedule->add_option("--u", sched.u, "Maximum unlabeled batch")->capture_default_str();
  schedule->add_option("--l", sched.l, "Labeled batch")->capture_default_str();
  schedule->add_option("--T", sched.T, "Total iterations")->capture_default_str();
  schedule->add_option("--base-lambda", sched.base_lambda)->capture_default_str();
  schedule->add_option("--lr0", lr0)->capture_default_str();
  schedule->add_flag("--flat", flat, "Constant u_t = u");

  std::string jsonl_path, run_config_path;
  auto* analyze = app.add_subcommand("analyze", "Recompute the summary from a metrics stream");
  analyze->add_option("metrics", jsonl_path, "metrics.jsonl of a train or stream run")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--run-config", run_config_path,
                      "run_config.json (defaults to the one next to the stream)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return kConfigError;
  }

  try {
    if (*train) {
      cli::command_train(load(config_path), std::cerr);
    } else if (*stream) {
      cli::command_stream(load(config_path), std::cerr);
    } else if (*federated) {
      cli::command_federated(load(config_path), std::cerr);
    } else if (*schedule) {
      sched.cbs_enabled = !flat;
      sched.mu = 0;
      cli::write_schedule_csv(std::cout, sched, lr0);
    } else if (*analyze) {
      std::filesystem::path rc = run_config_path;
      if (rc.empty()) rc = std::filesystem::path(jsonl_path).parent_path() / "run_config.json";
      const auto s = cli::analyze_stream(jsonl_path, rc);
      write_summary_header(std::cout);
      write_summary_row(std::cout, s);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunError;
  }
  return kOk;
}
