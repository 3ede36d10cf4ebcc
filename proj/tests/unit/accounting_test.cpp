#include <gtest/gtest.h>

#include <sstream>

#include "fastfix/accounting/ledger.hpp"
#include "fastfix/accounting/reports.hpp"
#include "fastfix/accounting/utilization.hpp"
#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {
namespace {

TEST(Ledger, FullConfidenceIteration) {
  PassLedger l(50000);
  l.record_iteration(64, 448, 448);
  EXPECT_EQ(l.forward_total(), 960u);
  EXPECT_EQ(l.backward_total(), 512u);
}

TEST(Ledger, EmptyMaskAndLabeledOnly) {
  PassLedger a(1), b(1);
  a.record_iteration(64, 448, 0);
  EXPECT_EQ(a.forward_total(), 512u);
  EXPECT_EQ(a.backward_total(), 64u);
  b.record_iteration(64, 0, 0);
  EXPECT_EQ(b.forward_total(), 64u);
  EXPECT_EQ(b.backward_total(), 64u);
}

TEST(Ledger, RejectsMoreConfidentThanDrawn) {
  PassLedger l(10);
  EXPECT_THROW(l.record_iteration(1, 2, 3), Error);
}

TEST(Ledger, EpochConversion) {
  EXPECT_DOUBLE_EQ(epochs_for(50000, 50000, 50000), 1.0);
  EXPECT_DOUBLE_EQ(epochs_for(75000, 25000, 50000), 1.0);
  EXPECT_DOUBLE_EQ(epochs_for(300, 100, 100) * 3, epochs_for(900, 300, 100));
  EXPECT_THROW(epochs_for(1, 1, 0), Error);
}

TEST(Ledger, HistoryKeepsLastTen) {
  PassLedger l(10);
  for (std::size_t i = 0; i < 25; ++i) l.record_iteration({i, 1, 2, 1, 0});
  ASSERT_EQ(l.history().size(), 10u);
  EXPECT_EQ(l.history().front().t, 15u);
  EXPECT_EQ(l.history().back().t, 24u);
}

TEST(Ledger, OrderIndependentAndMergeable) {
  Rng rng(5);
  std::vector<IterationRecord> recs;
  for (int i = 0; i < 50; ++i) {
    const std::size_t u = rng.below(100);
    recs.push_back({0, 8, u, u ? rng.below(u + 1) : 0, 0});
  }
  PassLedger fwd(100), rev(100), half_a(100), half_b(100);
  for (const auto& r : recs) fwd.record_iteration(r);
  for (auto it = recs.rbegin(); it != recs.rend(); ++it) rev.record_iteration(*it);
  for (std::size_t i = 0; i < recs.size(); ++i) (i % 2 ? half_a : half_b).record_iteration(recs[i]);
  half_b.merge(half_a);
  EXPECT_EQ(fwd.forward_total(), rev.forward_total());
  EXPECT_EQ(fwd.backward_total(), rev.backward_total());
  EXPECT_EQ(half_b.forward_total(), fwd.forward_total());
  EXPECT_EQ(half_b.backward_total(), fwd.backward_total());
}

TEST(Utilization, SingleIteration) {
  const std::vector<IterationRecord> s{{0, 64, 448, 280, 0}};
  const auto r = utilization(s);
  EXPECT_DOUBLE_EQ(*r.batch[0], 0.625);
  EXPECT_DOUBLE_EQ(*r.total, 0.625);
}

TEST(Utilization, CraftedStreamWithUndefinedMiddle) {
  const std::vector<IterationRecord> s{{0, 1, 200, 100, 0}, {1, 1, 0, 0, 0}, {2, 1, 100, 50, 0}};
  const auto r = utilization(s);
  EXPECT_DOUBLE_EQ(*r.total, 0.5);
  EXPECT_DOUBLE_EQ(*r.batch[0], 0.5);
  EXPECT_FALSE(r.batch[1].has_value());
  EXPECT_DOUBLE_EQ(*r.batch[2], 0.5);
  EXPECT_DOUBLE_EQ(*r.running[1], 0.5);
}

TEST(Utilization, AllConfidentAndAllEmpty) {
  std::vector<IterationRecord> s;
  for (std::size_t i = 0; i < 20; ++i) s.push_back({i, 4, 10 + i, 10 + i, 0});
  EXPECT_DOUBLE_EQ(*utilization(s).total, 1.0);
  const std::vector<IterationRecord> empty{{0, 4, 0, 0, 0}, {1, 4, 0, 0, 0}};
  const auto r = utilization(empty);
  EXPECT_FALSE(r.total.has_value());
  EXPECT_FALSE(r.running[1].has_value());
  EXPECT_THROW(utilization(std::vector<IterationRecord>{}), Error);
}

TEST(Utilization, TotalIsDrawWeightedMeanOfBatches) {
  Rng rng(8);
  std::vector<IterationRecord> s;
  for (std::size_t i = 0; i < 300; ++i) {
    const std::size_t u = rng.below(50);
    s.push_back({i, 4, u, u ? rng.below(u + 1) : 0, 0});
  }
  const auto r = utilization(s);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!r.batch[i]) continue;
    ASSERT_GE(*r.batch[i], 0.0);
    ASSERT_LE(*r.batch[i], 1.0);
    num += *r.batch[i] * static_cast<double>(s[i].u_t);
    den += static_cast<double>(s[i].u_t);
  }
  EXPECT_NEAR(*r.total, num / den, 1e-12);
}

TEST(Utilization, RunningMeanWindow) {
  std::vector<IterationRecord> s;
  for (std::size_t i = 0; i < 12; ++i) s.push_back({i, 1, 10, i < 2 ? 10u : 0u, 0});
  const auto r = utilization(s);
  EXPECT_DOUBLE_EQ(*r.running[9], 0.2);
  EXPECT_DOUBLE_EQ(*r.running[10], 0.1);
  EXPECT_DOUBLE_EQ(*r.running[11], 0.0);
}

TEST(Reports, SummaryRowFormatting) {
  std::ostringstream out;
  write_summary_header(out);
  write_summary_row(out, {"cbs+cpl", 960, 512, 0.25, 0.5, std::nullopt});
  EXPECT_EQ(out.str(),
            "flags,total_forward,total_backward,epochs,total_utilization,epochs_to_target\n"
            "cbs+cpl,960,512,0.25,0.5,\n");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
}

TEST(Reports, UtilizationCurveAverages) {
  std::vector<IterationRecord> s;
  for (std::size_t i = 0; i < 11; ++i) s.push_back({i, 1, 20, i, i / 2});
  std::ostringstream out;
  write_utilization_curve_csv(out, s);
  std::istringstream in(out.str());
  std::string line, last;
  std::getline(in, line);
  EXPECT_EQ(line, "t,u_t,n_confident_avg10,n_correct_avg10");
  std::getline(in, line);
  EXPECT_EQ(line, "0,20,0,0");
  while (std::getline(in, line)) last = line;
  // iterations 1..10: confident mean 5.5, correct (0+1+1+2+2+3+3+4+4+5)/10
  EXPECT_EQ(last, "10,20,5.5,2.5");
}

}  // namespace
}  // namespace fastfix
