#pragma once

#include <cstddef>
#include <vector>

namespace fastfix {

/// Per-class learning status for curriculum pseudo labeling.
class CplState {
 public:
  static constexpr int kNone = -1;

  CplState() = default;
  CplState(std::size_t unlabeled_count, std::size_t classes, double tau = 0.95,
           bool enabled = true);

  /// Stores `predicted_class` for the sample when confidence exceeds tau.
  void record(std::size_t sample_index, int predicted_class, double confidence);

  /// Per-class thresholds: M(sigma_c / max(max sigma, unused)) * tau with
  /// M(x) = x / (2 - x), or a flat tau when disabled.
  std::vector<double> thresholds() const;

  const std::vector<int>& predictions() const noexcept { return predictions_; }
  const std::vector<std::size_t>& sigma() const noexcept { return sigma_; }
  std::size_t unused_count() const noexcept { return unused_; }
  std::size_t size() const noexcept { return predictions_.size(); }
  std::size_t classes() const noexcept { return sigma_.size(); }
  double tau() const noexcept { return tau_; }
  bool enabled() const noexcept { return enabled_; }

  friend bool operator==(const CplState&, const CplState&) = default;

 private:
  std::vector<int> predictions_;
  std::vector<std::size_t> sigma_;
  std::size_t unused_ = 0;
  double tau_ = 0.95;
  bool enabled_ = true;
};

/// x / (2 - x).
double convex_map(double x);

}  // namespace fastfix
