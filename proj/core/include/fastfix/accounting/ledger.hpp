#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>

namespace fastfix {

struct IterationRecord {
  std::uint64_t t = 0;
  std::size_t l_t = 0;
  std::size_t u_t = 0;
  std::size_t n_confident = 0;
  std::size_t n_correct_confident = 0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

/// Counts per-sample forward and backward passes. An iteration costs
/// l + u + n_confident forward passes (labeled, weak, strong-on-confident)
/// and l + n_confident backward passes.
class PassLedger {
 public:
  static constexpr std::size_t kHistory = 10;

  PassLedger() = default;
  explicit PassLedger(std::size_t dataset_size) : dataset_size_(dataset_size) {}

  void record_iteration(std::size_t l_t, std::size_t u_t, std::size_t n_confident);
  void record_iteration(const IterationRecord& record);

  /// (forward + backward) / (2 * dataset_size).
  double epochs() const;

  /// Sums the totals of `other` into this ledger. History is left alone.
  void merge(const PassLedger& other);

  std::uint64_t forward_total() const noexcept { return forward_; }
  std::uint64_t backward_total() const noexcept { return backward_; }
  std::uint64_t total_passes() const noexcept { return forward_ + backward_; }
  std::size_t dataset_size() const noexcept { return dataset_size_; }
  const std::deque<IterationRecord>& history() const noexcept { return history_; }

 private:
  std::uint64_t forward_ = 0;
  std::uint64_t backward_ = 0;
  std::size_t dataset_size_ = 0;
  std::deque<IterationRecord> history_;
};

/// Pass-based epochs for raw totals.
double epochs_for(std::uint64_t forward, std::uint64_t backward, std::size_t dataset_size);

}  // namespace fastfix
