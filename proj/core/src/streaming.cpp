#include "fastfix/scenarios/streaming.hpp"

#include <algorithm>
#include <cmath>

#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {

void StreamPlan::validate() const {
  if (n_chunks == 0) throw ConfigError("stream.n_chunks", "must be positive");
  if (!(initial_fraction > 0.0 && initial_fraction <= 1.0)) {
    throw ConfigError("stream.initial_fraction", "must lie in (0, 1]");
  }
}

std::size_t chunks_visible(const StreamPlan& plan, std::uint64_t t, std::uint64_t T) {
  if (T == 0) throw Error("stream: T must be positive");
  const auto k = static_cast<std::size_t>(t * plan.n_chunks / T) + 1;
  return std::min(k, plan.n_chunks);
}

std::size_t visible_size(const StreamPlan& plan, std::size_t k, std::size_t pool) {
  if (k == 0) return 0;
  const std::size_t n = plan.n_chunks;
  if (k >= n) return pool;
  if (std::abs(plan.initial_fraction * static_cast<double>(n) - 1.0) < 1e-9) {
    return (k * pool + n - 1) / n;
  }
  const double f = plan.initial_fraction +
                   (1.0 - plan.initial_fraction) * static_cast<double>(k - 1) /
                       static_cast<double>(n - 1);
  const double v = std::ceil(f * static_cast<double>(pool) - 1e-9);
  return std::min(pool, static_cast<std::size_t>(v));
}

std::vector<std::size_t> stream_order(const std::vector<int>& labels, std::size_t classes,
                                      std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(classes);
  std::vector<std::size_t> unknown;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const int c = labels[p];
    if (c >= 0 && static_cast<std::size_t>(c) < classes) {
      by_class[static_cast<std::size_t>(c)].push_back(p);
    } else {
      unknown.push_back(p);
    }
  }
  if (!unknown.empty()) by_class.push_back(std::move(unknown));
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    Rng rng(derive_seed(seed, "stream_class", c));
    rng.shuffle(by_class[c].begin(), by_class[c].end());
  }
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (std::size_t round = 0; out.size() < labels.size(); ++round) {
    for (const auto& list : by_class) {
      if (round < list.size()) out.push_back(list[round]);
    }
  }
  return out;
}

RunLog run_streaming(const TrainConfig& config, const StreamPlan& plan, const Dataset& train_set,
                     const Dataset& test_set, const SslSplit& split, std::ostream* jsonl) {
  config.validate();
  plan.validate();
  train_set.validate();
  test_set.validate();
  Model model(model_spec_for(config, train_set), derive_seed(config.seed, "init"));
  SslLearner learner(config, train_set, channel_stats(train_set), split.labeled, split.unlabeled,
                     config.seed);

  const auto order =
      stream_order(gather_labels(train_set, split.unlabeled), train_set.class_count,
                   derive_seed(config.seed, "stream"));
  std::size_t shown = 0;
  auto expand = [&](std::uint64_t t, SslLearner& l) {
    const auto k = chunks_visible(plan, t, config.schedule.T);
    if (k == shown) return;
    shown = k;
    const auto n = visible_size(plan, k, order.size());
    std::vector<std::size_t> visible(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(visible.begin(), visible.end());
    l.set_visible(std::move(visible));
  };
  return run_training(config, learner, model, test_set, split.distinct_count(), jsonl, expand);
}

}  // namespace fastfix
