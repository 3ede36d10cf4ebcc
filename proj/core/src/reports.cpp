#include "fastfix/accounting/reports.hpp"

#include <charconv>
#include <system_error>

namespace fastfix {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return res.ec == std::errc() ? std::string(buf, res.ptr) : std::string("nan");
}

namespace {
std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}
}  // namespace

void write_summary_header(std::ostream& out) {
  out << "flags,total_forward,total_backward,epochs,total_utilization,epochs_to_target\n";
}

void write_summary_row(std::ostream& out, const RunSummary& s) {
  out << s.flags << ',' << s.total_forward << ',' << s.total_backward << ','
      << format_double(s.epochs) << ',' << optional_field(s.total_utilization) << ','
      << optional_field(s.epochs_to_target) << '\n';
}

void write_utilization_curve_csv(std::ostream& out, std::span<const IterationRecord> stream) {
  out << "t,u_t,n_confident_avg10,n_correct_avg10\n";
  std::size_t conf = 0, correct = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    conf += stream[i].n_confident;
    correct += stream[i].n_correct_confident;
    if (i >= PassLedger::kHistory) {
      conf -= stream[i - PassLedger::kHistory].n_confident;
      correct -= stream[i - PassLedger::kHistory].n_correct_confident;
    }
    const double n = static_cast<double>(std::min(i + 1, PassLedger::kHistory));
    out << stream[i].t << ',' << stream[i].u_t << ',' << format_double(static_cast<double>(conf) / n)
        << ',' << format_double(static_cast<double>(correct) / n) << '\n';
  }
}

}  // namespace fastfix
