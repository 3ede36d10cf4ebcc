#include "fastfix/curricula/cpl.hpp"

#include <algorithm>
#include <string>

#include "fastfix/error.hpp"

namespace fastfix {

CplState::CplState(std::size_t unlabeled_count, std::size_t classes, double tau, bool enabled)
    : predictions_(unlabeled_count, kNone),
      sigma_(classes, 0),
      unused_(unlabeled_count),
      tau_(tau),
      enabled_(enabled) {
  if (!(tau > 0.0 && tau <= 1.0)) throw Error("cpl: tau must lie in (0, 1]");
  if (classes == 0) throw Error("cpl: class count must be positive");
}

void CplState::record(std::size_t sample_index, int predicted_class, double confidence) {
  if (sample_index >= predictions_.size()) {
    throw Error("cpl: sample index " + std::to_string(sample_index) + " out of range " +
                std::to_string(predictions_.size()));
  }
  if (predicted_class < 0 || static_cast<std::size_t>(predicted_class) >= sigma_.size()) {
    throw Error("cpl: class " + std::to_string(predicted_class) + " out of range");
  }
  if (!(confidence > tau_)) return;
  int& slot = predictions_[sample_index];
  if (slot == predicted_class) return;
  if (slot == kNone) {
    --unused_;
  } else {
    --sigma_[static_cast<std::size_t>(slot)];
  }
  ++sigma_[static_cast<std::size_t>(predicted_class)];
  slot = predicted_class;
}

std::vector<double> CplState::thresholds() const {
  std::vector<double> out(sigma_.size(), tau_);
  if (!enabled_) return out;
  const std::size_t denom = std::max(*std::max_element(sigma_.begin(), sigma_.end()), unused_);
  if (denom == 0) return out;
  for (std::size_t c = 0; c < sigma_.size(); ++c) {
    const double beta = static_cast<double>(sigma_[c]) / static_cast<double>(denom);
    out[c] = convex_map(beta) * tau_;
  }
  return out;
}

double convex_map(double x) { return x / (2.0 - x); }

}  // namespace fastfix
