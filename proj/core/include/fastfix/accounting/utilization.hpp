#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fastfix/accounting/ledger.hpp"

namespace fastfix {

/// Utilization figures for a run. Empty optionals mark undefined values
/// (iterations with u_t = 0, or a run that never drew unlabeled data).
struct UtilizationReport {
  std::vector<std::optional<double>> batch;
  /// Mean of the defined batch values among the last 10 iterations.
  std::vector<std::optional<double>> running;
  std::optional<double> total;
  std::size_t confident_sum = 0;
  std::size_t drawn_sum = 0;
};

UtilizationReport utilization(std::span<const IterationRecord> stream);

}  // namespace fastfix
