#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "fastfix/dataio/dataset.hpp"
#include "fastfix/dataio/split.hpp"
#include "fastfix/engine/trainer.hpp"

namespace fastfix {

struct StreamPlan {
  std::size_t n_chunks = 10;
  double initial_fraction = 0.1;

  void validate() const;

  friend bool operator==(const StreamPlan&, const StreamPlan&) = default;
};

/// Number of chunks visible at iteration t: one at start, one more at each
/// multiple of T / n_chunks.
std::size_t chunks_visible(const StreamPlan& plan, std::uint64_t t, std::uint64_t T);

/// Pool size once k chunks are visible; k = 1 gives ceil(initial_fraction·U)
/// and k = n_chunks gives U.
std::size_t visible_size(const StreamPlan& plan, std::size_t k, std::size_t pool);

/// Reveal order over positions [0, pool): a seeded shuffle within each
/// class, interleaved across classes so every prefix stays balanced.
std::vector<std::size_t> stream_order(const std::vector<int>& labels, std::size_t classes,
                                      std::uint64_t seed);

/// Centralised run where the unlabeled pool grows chunk by chunk.
RunLog run_streaming(const TrainConfig& config, const StreamPlan& plan, const Dataset& train_set,
                     const Dataset& test_set, const SslSplit& split,
                     std::ostream* jsonl = nullptr);

}  // namespace fastfix
