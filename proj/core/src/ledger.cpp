#include "fastfix/accounting/ledger.hpp"

#include <string>

#include "fastfix/error.hpp"

namespace fastfix {

void PassLedger::record_iteration(std::size_t l_t, std::size_t u_t, std::size_t n_confident) {
  record_iteration(IterationRecord{0, l_t, u_t, n_confident, 0});
}

void PassLedger::record_iteration(const IterationRecord& r) {
  if (r.n_confident > r.u_t) {
    throw Error("ledger: n_confident " + std::to_string(r.n_confident) + " exceeds u_t " +
                std::to_string(r.u_t));
  }
  forward_ += r.l_t + r.u_t + r.n_confident;
  backward_ += r.l_t + r.n_confident;
  history_.push_back(r);
  if (history_.size() > kHistory) history_.pop_front();
}

double PassLedger::epochs() const { return epochs_for(forward_, backward_, dataset_size_); }

void PassLedger::merge(const PassLedger& other) {
  forward_ += other.forward_;
  backward_ += other.backward_;
}

double epochs_for(std::uint64_t forward, std::uint64_t backward, std::size_t dataset_size) {
  if (dataset_size == 0) throw Error("ledger: dataset size must be positive");
  return static_cast<double>(forward + backward) / (2.0 * static_cast<double>(dataset_size));
}

}  // namespace fastfix
