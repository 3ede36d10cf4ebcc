#include "fastfix/accounting/utilization.hpp"

#include "fastfix/error.hpp"

namespace fastfix {

UtilizationReport utilization(std::span<const IterationRecord> stream) {
  if (stream.empty()) throw Error("utilization: empty stream");
  UtilizationReport rep;
  rep.batch.reserve(stream.size());
  rep.running.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& r = stream[i];
    if (r.n_confident > r.u_t) throw Error("utilization: n_confident exceeds u_t");
    rep.confident_sum += r.n_confident;
    rep.drawn_sum += r.u_t;
    if (r.u_t == 0) {
      rep.batch.emplace_back();
    } else {
      rep.batch.emplace_back(static_cast<double>(r.n_confident) / static_cast<double>(r.u_t));
    }
    const std::size_t lo = i + 1 >= PassLedger::kHistory ? i + 1 - PassLedger::kHistory : 0;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = lo; j <= i; ++j) {
      if (rep.batch[j]) {
        sum += *rep.batch[j];
        ++n;
      }
    }
    if (n == 0) {
      rep.running.emplace_back();
    } else {
      rep.running.emplace_back(sum / static_cast<double>(n));
    }
  }
  if (rep.drawn_sum > 0) {
    rep.total = static_cast<double>(rep.confident_sum) / static_cast<double>(rep.drawn_sum);
  }
  return rep;
}

}  // namespace fastfix
