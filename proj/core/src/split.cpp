#include "fastfix/dataio/split.hpp"

#include <algorithm>

#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {

std::size_t SslSplit::distinct_count() const {
  std::vector<std::size_t> all(labeled);
  all.insert(all.end(), unlabeled.begin(), unlabeled.end());
  std::sort(all.begin(), all.end());
  return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

SslSplit make_ssl_split(const Dataset& dataset, std::size_t n_labeled, std::uint64_t seed,
                        bool labeled_also_unlabeled) {
  const std::size_t classes = dataset.class_count;
  if (classes == 0 || n_labeled % classes != 0) {
    throw DataError("split: n_labeled=" + std::to_string(n_labeled) +
                    " is not divisible by the class count " + std::to_string(classes));
  }
  if (n_labeled > dataset.size()) {
    throw DataError("split: n_labeled exceeds dataset size " + std::to_string(dataset.size()));
  }
  const std::size_t per_class = n_labeled / classes;

  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int y = dataset.labels[i];
    if (y != kUnlabeled) by_class[static_cast<std::size_t>(y)].push_back(i);
  }

  SslSplit split;
  split.seed = seed;
  for (std::size_t c = 0; c < classes; ++c) {
    auto& members = by_class[c];
    if (members.size() < per_class) {
      throw DataError("split: class " + std::to_string(c) + " has " +
                      std::to_string(members.size()) + " samples, need " +
                      std::to_string(per_class));
    }
    Rng rng(derive_seed(seed, "split", c));
    rng.shuffle(members.begin(), members.end());
    split.labeled.insert(split.labeled.end(), members.begin(),
                         members.begin() + static_cast<std::ptrdiff_t>(per_class));
  }
  std::sort(split.labeled.begin(), split.labeled.end());

  if (labeled_also_unlabeled) {
    split.unlabeled.resize(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) split.unlabeled[i] = i;
  } else {
    std::size_t j = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (j < split.labeled.size() && split.labeled[j] == i) {
        ++j;
        continue;
      }
      split.unlabeled.push_back(i);
    }
  }
  return split;
}

}  // namespace fastfix
