#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "fastfix/accounting/ledger.hpp"

namespace fastfix {

struct RunSummary {
  std::string flags;
  std::uint64_t total_forward = 0;
  std::uint64_t total_backward = 0;
  double epochs = 0.0;
  std::optional<double> total_utilization;
  std::optional<double> epochs_to_target;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_summary_header(std::ostream& out);
/// Undefined values are written as empty fields.
void write_summary_row(std::ostream& out, const RunSummary& summary);

/// Columns t, u_t, n_confident_avg10, n_correct_avg10: trailing means over
/// the last 10 iterations.
void write_utilization_curve_csv(std::ostream& out, std::span<const IterationRecord> stream);

}  // namespace fastfix
