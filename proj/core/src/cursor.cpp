#include "fastfix/dataio/cursor.hpp"

#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {

BatchCursor::BatchCursor(std::vector<std::size_t> pool, std::uint64_t seed)
    : pool_(std::move(pool)), seed_(seed) {
  shuffle();
}

void BatchCursor::shuffle() {
  permutation_ = pool_;
  Rng rng(derive_seed(seed_, "cursor", epoch_));
  rng.shuffle(permutation_.begin(), permutation_.end());
  position_ = 0;
}

std::vector<std::size_t> BatchCursor::next(std::size_t k) {
  std::vector<std::size_t> out;
  if (k == 0) return out;
  if (permutation_.empty()) throw Error("cursor: cannot draw from an empty pool");
  out.reserve(k);
  while (out.size() < k) {
    out.push_back(permutation_[position_++]);
    if (position_ == permutation_.size()) {
      ++epoch_;
      shuffle();
    }
  }
  return out;
}

}  // namespace fastfix
