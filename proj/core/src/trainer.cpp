#include "fastfix/engine/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {

void TrainConfig::validate() const {
  schedule.validate();
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("threshold.tau", "must lie in (0, 1]");
  if (eval_every == 0) throw ConfigError("train.eval_every", "must be positive");
  if (target_accuracy && !(*target_accuracy > 0.0 && *target_accuracy <= 1.0)) {
    throw ConfigError("train.target_accuracy", "must lie in (0, 1]");
  }
  if (!(sgd.lr > 0.0)) throw ConfigError("optim.lr", "must be positive");
  if (!(sgd.momentum >= 0.0 && sgd.momentum < 1.0)) {
    throw ConfigError("optim.momentum", "must lie in [0, 1)");
  }
  if (!(sgd.weight_decay >= 0.0)) throw ConfigError("optim.weight_decay", "must be nonnegative");
  if (!(ema_decay >= 0.0 && ema_decay < 1.0)) {
    throw ConfigError("optim.ema_decay", "must lie in [0, 1)");
  }
  if (strong.magnitude < 0 || strong.magnitude > 30) {
    throw ConfigError("augment.magnitude", "must lie in [0, 30]");
  }
  if (!(strong.cutout_fraction >= 0.0 && strong.cutout_fraction <= 0.5)) {
    throw ConfigError("augment.cutout_fraction", "must lie in [0, 0.5]");
  }
  if (widths.empty() || std::find(widths.begin(), widths.end(), 0u) != widths.end()) {
    throw ConfigError("model.widths", "must be a nonempty list of positive widths");
  }
  if (eval_batch == 0) throw ConfigError("train.eval_batch", "must be positive");
}

std::string TrainConfig::variant() const {
  std::string out;
  auto add = [&](const char* tag) {
    if (!out.empty()) out += '+';
    out += tag;
  };
  if (schedule.cbs_enabled) add("cbs");
  if (labeled_strong_aug) add("lsa");
  if (cpl_enabled) add("cpl");
  return out.empty() ? "vanilla" : out;
}

std::vector<IterationRecord> RunLog::iteration_records() const {
  std::vector<IterationRecord> out;
  out.reserve(steps.size());
  for (const auto& s : steps) {
    out.push_back({s.t, s.l_t, s.u_t, s.n_confident, s.n_correct_confident});
  }
  return out;
}

ModelSpec model_spec_for(const TrainConfig& config, const Dataset& dataset) {
  ModelSpec spec;
  spec.in_channels = dataset.channels;
  spec.height = dataset.height;
  spec.width = dataset.width;
  spec.classes = dataset.class_count;
  spec.widths = config.widths;
  return spec;
}

SslLearner::SslLearner(const TrainConfig& config, const Dataset& train, ChannelStats stats,
                       std::vector<std::size_t> labeled, std::vector<std::size_t> unlabeled,
                       std::uint64_t seed)
    : config_(config),
      train_(train),
      stats_(std::move(stats)),
      labeled_(std::move(labeled)),
      unlabeled_(std::move(unlabeled)),
      seed_(seed),
      labeled_cursor_(labeled_, derive_seed(seed, "labeled")),
      cpl_(unlabeled_.size(), train.class_count, config.tau, config.cpl_enabled) {
  if (labeled_.empty()) throw DataError("learner: empty labeled set");
  std::vector<std::size_t> all(unlabeled_.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  set_visible(std::move(all));
}

void SslLearner::set_visible(std::vector<std::size_t> positions) {
  for (const auto p : positions) {
    if (p >= unlabeled_.size()) throw Error("learner: visible position out of range");
  }
  visible_count_ = positions.size();
  unlabeled_cursor_ = BatchCursor(std::move(positions), derive_seed(seed_, "unlabeled", generation_++));
}

StepStats SslLearner::step(Model& model, Sgd& optimizer, std::uint64_t t) {
  const auto& sc = config_.schedule;
  const std::size_t u_t = std::min(unlabeled_batch_size(sc, t), sc.u);
  const double lambda_t = lambda_coeff(sc, u_t);
  optimizer.set_lr(cosine_lr(config_.sgd.lr, t, sc.T));

  auto image_at = [&](std::size_t idx) {
    return Image(train_.channels, train_.height, train_.width, train_.image(idx));
  };

  StepBatch batch;
  std::vector<Image> images;
  const auto lab = labeled_cursor_.next(sc.l);
  images.reserve(std::max(lab.size(), u_t));
  for (std::size_t k = 0; k < lab.size(); ++k) {
    Rng rng(derive_seed(seed_, "labeled_aug", t, k));
    const auto img = image_at(lab[k]);
    images.push_back(config_.labeled_strong_aug
                         ? strong_augment(weak_augment(img, rng), rng, config_.strong)
                         : weak_augment(img, rng));
    batch.labels.push_back(train_.labels[lab[k]]);
  }
  batch.labeled = pack_images(images, stats_);

  std::vector<std::size_t> pos;
  if (u_t > 0 && visible_count_ > 0) pos = unlabeled_cursor_.next(u_t);
  if (!pos.empty()) {
    std::vector<Image> weak, strong;
    weak.reserve(pos.size());
    strong.reserve(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const std::size_t idx = unlabeled_[pos[k]];
      const auto img = image_at(idx);
      Rng wr(derive_seed(seed_, "weak", t, k));
      weak.push_back(weak_augment(img, wr));
      Rng sr(derive_seed(seed_, "strong", t, k));
      strong.push_back(strong_augment(weak_augment(img, sr), sr, config_.strong));
      batch.unlabeled_truth.push_back(train_.labels[idx]);
    }
    batch.unlabeled_weak = pack_images(weak, stats_);
    batch.unlabeled_strong = pack_images(strong, stats_);
  }

  const auto thresholds = cpl_.thresholds();
  PseudoBatch pseudo;
  auto s = fixmatch_step(model, optimizer, batch, thresholds, lambda_t, config_.ema_decay, &pseudo);
  s.t = t;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    cpl_.record(pos[k], pseudo.labels[k], pseudo.confidence[k]);
  }
  return s;
}

void MetricsWriter::step(const StepStats& s, const PassLedger& ledger) {
  if (!out_) return;
  nlohmann::ordered_json j;
  j["t"] = s.t;
  j["l_t"] = s.l_t;
  j["u_t"] = s.u_t;
  j["lambda"] = s.lambda_t;
  j["lr"] = s.lr;
  j["n_confident"] = s.n_confident;
  j["n_correct_confident"] = s.n_correct_confident;
  j["loss_s"] = s.loss_s;
  j["loss_u"] = s.loss_u;
  j["fwd_total"] = ledger.forward_total();
  j["bwd_total"] = ledger.backward_total();
  *out_ << j.dump() << '\n';
}

void MetricsWriter::eval(const EvalRecord& e) {
  if (!out_) return;
  nlohmann::ordered_json j;
  j["t"] = e.t;
  j["epoch_equivalent"] = e.epoch_equivalent;
  j["accuracy"] = e.accuracy;
  *out_ << j.dump() << '\n';
}

RunLog run_training(const TrainConfig& config, SslLearner& learner, Model& model,
                    const Dataset& test_set, std::size_t dataset_size, std::ostream* jsonl,
                    const StepHook& before_step) {
  RunLog log;
  log.ledger = PassLedger(dataset_size);
  Sgd optimizer(model, config.sgd);
  MetricsWriter writer(jsonl);
  const std::uint64_t T = config.schedule.T;
  log.steps.reserve(static_cast<std::size_t>(T));

  for (std::uint64_t t = 0; t < T; ++t) {
    if (before_step) before_step(t, learner);
    const auto s = learner.step(model, optimizer, t);
    log.ledger.record_iteration({s.t, s.l_t, s.u_t, s.n_confident, s.n_correct_confident});
    log.steps.push_back(s);
    writer.step(s, log.ledger);

    if ((t + 1) % config.eval_every == 0 || t + 1 == T) {
      EvalRecord e;
      e.t = t + 1;
      e.epoch_equivalent = log.ledger.epochs();
      e.forward_total = log.ledger.forward_total();
      e.backward_total = log.ledger.backward_total();
      e.accuracy = evaluate(model, test_set, learner.stats(), true, config.eval_batch);
      if (!std::isfinite(e.accuracy)) throw Error("evaluation produced a non-finite accuracy");
      log.evals.push_back(e);
      writer.eval(e);
      log.final_accuracy = e.accuracy;
      if (config.target_accuracy && e.accuracy >= *config.target_accuracy) {
        log.target_hit = e;
        break;
      }
    }
  }
  return log;
}

RunLog train(const TrainConfig& config, const Dataset& train_set, const Dataset& test_set,
             const SslSplit& split, std::ostream* jsonl, Model* model_out) {
  config.validate();
  train_set.validate();
  test_set.validate();
  Model model(model_spec_for(config, train_set), derive_seed(config.seed, "init"));
  SslLearner learner(config, train_set, channel_stats(train_set), split.labeled, split.unlabeled,
                     config.seed);
  auto log = run_training(config, learner, model, test_set, split.distinct_count(), jsonl);
  if (model_out) *model_out = std::move(model);
  return log;
}

}  // namespace fastfix
