#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fastfix/accounting/ledger.hpp"
#include "fastfix/augment/augment.hpp"
#include "fastfix/curricula/cpl.hpp"
#include "fastfix/curricula/schedule.hpp"
#include "fastfix/dataio/cursor.hpp"
#include "fastfix/dataio/dataset.hpp"
#include "fastfix/dataio/split.hpp"
#include "fastfix/engine/fixmatch.hpp"
#include "fastfix/gradcore/model.hpp"
#include "fastfix/gradcore/optim.hpp"

namespace fastfix {

struct TrainConfig {
  ScheduleConfig schedule;
  double tau = 0.95;
  bool cpl_enabled = false;
  bool labeled_strong_aug = false;
  std::uint64_t seed = 0;
  std::uint64_t eval_every = 1000;
  std::optional<double> target_accuracy;
  SgdConfig sgd;
  double ema_decay = 0.999;
  AugmentPolicy strong;
  std::vector<std::size_t> widths{32, 64, 128};
  std::size_t eval_batch = 256;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;

  /// Short flag label such as "vanilla" or "cbs+lsa+cpl".
  std::string variant() const;
};

struct EvalRecord {
  std::uint64_t t = 0;
  double epoch_equivalent = 0.0;
  double accuracy = 0.0;
  std::uint64_t forward_total = 0;
  std::uint64_t backward_total = 0;
};

struct RunLog {
  std::vector<StepStats> steps;
  std::vector<EvalRecord> evals;
  PassLedger ledger;
  std::optional<EvalRecord> target_hit;
  double final_accuracy = 0.0;

  std::vector<IterationRecord> iteration_records() const;
};

/// Per-iteration batch assembly and update for one learner (a centralised
/// run, one federated client, or a streaming run). Unlabeled samples are
/// addressed by their position in `unlabeled`, which is also the CPL index.
class SslLearner {
 public:
  SslLearner(const TrainConfig& config, const Dataset& train, ChannelStats stats,
             std::vector<std::size_t> labeled, std::vector<std::size_t> unlabeled,
             std::uint64_t seed);

  /// Restricts unlabeled draws to the given positions and restarts the
  /// unlabeled cursor over them.
  void set_visible(std::vector<std::size_t> positions);
  std::size_t visible_count() const noexcept { return visible_count_; }

  /// Iteration t of the global schedule. The learning rate is set from the
  /// cosine schedule before the update.
  StepStats step(Model& model, Sgd& optimizer, std::uint64_t t);

  const CplState& cpl() const noexcept { return cpl_; }
  const ChannelStats& stats() const noexcept { return stats_; }

 private:
  const TrainConfig& config_;
  const Dataset& train_;
  ChannelStats stats_;
  std::vector<std::size_t> labeled_;
  std::vector<std::size_t> unlabeled_;
  std::uint64_t seed_;
  BatchCursor labeled_cursor_;
  BatchCursor unlabeled_cursor_;
  std::uint64_t generation_ = 0;
  std::size_t visible_count_ = 0;
  CplState cpl_;
};

/// Writes one JSON object per line.
class MetricsWriter {
 public:
  explicit MetricsWriter(std::ostream* out) : out_(out) {}
  void step(const StepStats& s, const PassLedger& ledger);
  void eval(const EvalRecord& e);

 private:
  std::ostream* out_;
};

/// Hook run before each iteration, e.g. to widen the visible pool.
using StepHook = std::function<void(std::uint64_t t, SslLearner& learner)>;

/// The iteration loop shared by centralised and streaming runs.
RunLog run_training(const TrainConfig& config, SslLearner& learner, Model& model,
                    const Dataset& test_set, std::size_t dataset_size, std::ostream* jsonl,
                    const StepHook& before_step = {});

/// Trains a fresh model for schedule.T iterations, evaluating the EMA
/// weights every eval_every iterations and after the last one. Stops early
/// once target_accuracy is reached.
RunLog train(const TrainConfig& config, const Dataset& train_set, const Dataset& test_set,
             const SslSplit& split, std::ostream* jsonl = nullptr, Model* model_out = nullptr);

ModelSpec model_spec_for(const TrainConfig& config, const Dataset& dataset);

}  // namespace fastfix
