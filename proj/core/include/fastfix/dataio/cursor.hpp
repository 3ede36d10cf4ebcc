#pragma once

#include <cstdint>
#include <vector>

namespace fastfix {

/// Cycles through a pool of indices in shuffled order. Each completed pass
/// triggers a reshuffle seeded from (seed, pass number), so a run is
/// reproducible from the seed alone.
class BatchCursor {
 public:
  BatchCursor() = default;
  BatchCursor(std::vector<std::size_t> pool, std::uint64_t seed);

  /// Next k pool entries, crossing pass boundaries as needed. k = 0 yields
  /// an empty list; k > 0 on an empty pool throws.
  std::vector<std::size_t> next(std::size_t k);

  std::size_t pool_size() const noexcept { return permutation_.size(); }
  std::size_t position() const noexcept { return position_; }
  std::uint64_t epoch() const noexcept { return epoch_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

 private:
  void shuffle();

  std::vector<std::size_t> pool_;
  std::vector<std::size_t> permutation_;
  std::size_t position_ = 0;
  std::uint64_t epoch_ = 0;
  std::uint64_t seed_ = 0;
};

}  // namespace fastfix
