#include "fastfix/cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fastfix/accounting/utilization.hpp"
#include "fastfix/dataio/split.hpp"
#include "fastfix/error.hpp"
#include "fastfix/gradcore/checkpoint.hpp"
#include "fastfix/rng.hpp"
#include "fastfix/scenarios/federated.hpp"
#include "fastfix/scenarios/streaming.hpp"

namespace fastfix::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_run_config(const RunConfig& cfg, const std::string& variant, std::size_t dataset_size,
                      const ChannelStats& stats) {
  nlohmann::ordered_json j;
  j["config"] = to_json(cfg);
  j["variant"] = variant;
  j["dataset_size"] = dataset_size;
  j["normalization"] = {{"mean", stats.mean}, {"std", stats.stddev}};
  auto out = open_out(fs::path(cfg.output_dir) / "run_config.json");
  out << j.dump(2) << '\n';
}

void write_summary(const fs::path& dir, const RunSummary& s) {
  auto out = open_out(dir / "summary.csv");
  write_summary_header(out);
  write_summary_row(out, s);
}

SslSplit split_for(const RunConfig& cfg, const Dataset& train) {
  return make_ssl_split(train, cfg.data.n_labeled, derive_seed(cfg.seed, "split"),
                        cfg.data.labeled_also_unlabeled);
}

RunSummary centralised(const RunConfig& cfg, std::ostream& log, bool streaming) {
  const auto data = load_data(cfg);
  const auto split = split_for(cfg, data.train);
  fs::create_directories(cfg.output_dir);
  const fs::path dir = cfg.output_dir;
  write_run_config(cfg, cfg.train.variant(), split.distinct_count(), channel_stats(data.train));

  auto metrics = open_out(dir / "metrics.jsonl");
  RunLog run;
  if (streaming) {
    run = run_streaming(cfg.train, cfg.stream, data.train, data.test, split, &metrics);
  } else {
    Model model(model_spec_for(cfg.train, data.train), 0);
    run = train(cfg.train, data.train, data.test, split, &metrics, &model);
    save_checkpoint(dir / "model.ffml", model);
  }
  metrics.close();

  const auto summary = summarize(cfg.train.variant(), run);
  write_summary(dir, summary);
  const auto records = run.iteration_records();
  auto fig = open_out(dir / "utilization_curve.csv");
  write_utilization_curve_csv(fig, records);

  log << summary.flags << ": " << run.steps.size() << " iterations, " << summary.epochs
      << " epochs, final accuracy " << run.final_accuracy << '\n';
  return summary;
}

}  // namespace

void apply_env_overrides(RunConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) config.output_dir = dir;
}

RunSummary summarize(const std::string& flags, const RunLog& log) {
  RunSummary s;
  s.flags = flags;
  s.total_forward = log.ledger.forward_total();
  s.total_backward = log.ledger.backward_total();
  s.epochs = log.ledger.epochs();
  if (!log.steps.empty()) {
    const auto records = log.iteration_records();
    s.total_utilization = utilization(records).total;
  }
  if (log.target_hit) s.epochs_to_target = log.target_hit->epoch_equivalent;
  return s;
}

RunSummary command_train(const RunConfig& config, std::ostream& log) {
  return centralised(config, log, false);
}

RunSummary command_stream(const RunConfig& config, std::ostream& log) {
  return centralised(config, log, true);
}

RunSummary command_federated(const RunConfig& cfg, std::ostream& log) {
  const auto data = load_data(cfg);
  fs::create_directories(cfg.output_dir);
  const fs::path dir = cfg.output_dir;
  write_run_config(cfg, cfg.train.variant(), data.train.size(), channel_stats(data.train));

  auto rounds = open_out(dir / "rounds.jsonl");
  const auto fed = run_federated(cfg.federated, cfg.train, data.train, data.test, &rounds);
  rounds.close();

  RunSummary s;
  s.flags = cfg.train.variant();
  s.total_forward = fed.ledger.forward_total();
  s.total_backward = fed.ledger.backward_total();
  s.epochs = fed.ledger.epochs();
  if (fed.drawn_sum > 0) {
    s.total_utilization = static_cast<double>(fed.confident_sum) / static_cast<double>(fed.drawn_sum);
  }
  if (fed.target_hit) s.epochs_to_target = fed.target_hit->cumulative_epochs;
  write_summary(dir, s);
  log << s.flags << ": " << fed.rounds.size() << " rounds, " << s.epochs
      << " epochs, final accuracy " << fed.final_accuracy << '\n';
  return s;
}

void write_schedule_csv(std::ostream& out, const ScheduleConfig& schedule, double lr0) {
  schedule.validate();
  out << "t,u_t,lambda_t,lr_t\n";
  for (std::uint64_t t = 0; t <= schedule.T; ++t) {
    const auto u_t = unlabeled_batch_size(schedule, t);
    out << t << ',' << u_t << ',' << format_double(lambda_coeff(schedule, u_t)) << ','
        << format_double(cosine_lr(lr0, t, schedule.T)) << '\n';
  }
}

RunSummary analyze_stream(const fs::path& jsonl, const fs::path& run_config) {
  std::ifstream cfg_in(run_config);
  if (!cfg_in) throw Error("cannot open " + run_config.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(cfg_in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(run_config.string() + ": " + e.what());
  }
  const auto dataset_size = meta.at("dataset_size").get<std::size_t>();
  std::optional<double> target;
  if (const auto& t = meta.at("config").at("train").at("target_accuracy"); !t.is_null()) {
    target = t.get<double>();
  }

  std::ifstream in(jsonl);
  if (!in) throw Error("cannot open " + jsonl.string());
  PassLedger ledger(dataset_size);
  std::vector<IterationRecord> records;
  RunSummary s;
  s.flags = meta.at("variant").get<std::string>();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      if (j.contains("u_t")) {
        IterationRecord r{j.at("t").get<std::uint64_t>(), j.at("l_t").get<std::size_t>(),
                          j.at("u_t").get<std::size_t>(), j.at("n_confident").get<std::size_t>(),
                          j.at("n_correct_confident").get<std::size_t>()};
        ledger.record_iteration(r);
        records.push_back(r);
        if (ledger.forward_total() != j.at("fwd_total").get<std::uint64_t>() ||
            ledger.backward_total() != j.at("bwd_total").get<std::uint64_t>()) {
          throw Error("pass totals disagree with the recorded stream");
        }
      } else if (j.contains("accuracy")) {
        if (target && !s.epochs_to_target && j.at("accuracy").get<double>() >= *target) {
          s.epochs_to_target = ledger.epochs();
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  s.total_forward = ledger.forward_total();
  s.total_backward = ledger.backward_total();
  s.epochs = ledger.epochs();
  if (!records.empty()) s.total_utilization = utilization(records).total;
  return s;
}

}  // namespace fastfix::cli
