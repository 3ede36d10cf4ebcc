#pragma once

#include <cstdint>
#include <vector>

#include "fastfix/dataio/dataset.hpp"

namespace fastfix {

/// Labeled/unlabeled index partition of one dataset.
struct SslSplit {
  std::vector<std::size_t> labeled;
  std::vector<std::size_t> unlabeled;
  std::uint64_t seed = 0;

  /// Size of labeled ∪ unlabeled: the sample count one epoch refers to.
  std::size_t distinct_count() const;

  friend bool operator==(const SslSplit&, const SslSplit&) = default;
};

/// Picks exactly n_labeled / C samples per class by a seeded shuffle.
/// With labeled_also_unlabeled the unlabeled pool is every index;
/// otherwise it is the complement of the labeled set. Both lists ascend.
SslSplit make_ssl_split(const Dataset& dataset, std::size_t n_labeled, std::uint64_t seed,
                        bool labeled_also_unlabeled = true);

}  // namespace fastfix
