#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fastfix/curricula/cpl.hpp"
#include "fastfix/curricula/schedule.hpp"
#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {
namespace {

TEST(Bexp, Boundaries) {
  EXPECT_EQ(bexp(448, 0, 1024, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(bexp(448, 1024, 1024, 0.7), 448.0);
  EXPECT_THROW(bexp(448, 0, 0, 0.7), Error);
}

TEST(Bexp, MidpointHandValue) {
  EXPECT_NEAR(bexp(448, 512, 1024, 0.7), 448.0 * (1.0 - 0.5 / 0.65), 1e-12);
  EXPECT_NEAR(bexp(448, 512, 1024, 0.7), 103.3846153846, 1e-9);
}

TEST(Bexp, AlphaZeroIsLinear) {
  for (int t = 0; t <= 8; ++t) EXPECT_NEAR(bexp(80, t, 8, 0.0), 10.0 * t, 1e-12);
}

TEST(Bexp, MonotoneAndOrderedInAlpha) {
  const double alphas[] = {0.0, 0.3, 0.5, 0.7, 0.9, 0.99};
  for (double a : alphas) {
    double prev = -1.0;
    for (int t = 0; t <= 1000; ++t) {
      const double v = bexp(448, t, 1000, a);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
  for (int t = 1; t < 1000; t += 37) {
    for (std::size_t i = 0; i + 1 < std::size(alphas); ++i) {
      EXPECT_LE(bexp(448, t, 1000, alphas[i + 1]), bexp(448, t, 1000, alphas[i]));
    }
  }
}

TEST(UnlabeledBatch, VanillaAndCurriculum) {
  ScheduleConfig c;
  c.T = 1024;
  for (std::uint64_t t : {0u, 5u, 1023u}) EXPECT_EQ(unlabeled_batch_size(c, t), 448u);
  c.cbs_enabled = true;
  EXPECT_EQ(unlabeled_batch_size(c, 0), 0u);
  EXPECT_EQ(unlabeled_batch_size(c, 512), 103u);
  c.T = 1 << 20;
  EXPECT_EQ(unlabeled_batch_size(c, c.T - 1), 448u);
}

TEST(MeanFraction, TableValues) {
  EXPECT_NEAR(mean_bexp_fraction(0.5), 0.386, 5e-4);
  EXPECT_NEAR(mean_bexp_fraction(0.7), 0.309, 5e-4);
  EXPECT_NEAR(mean_bexp_fraction(0.9), 0.173, 5e-4);
  EXPECT_THROW(mean_bexp_fraction(0.0), Error);
  EXPECT_THROW(mean_bexp_fraction(1.0), Error);
}

// Independent oracle: composite Simpson integration of bexp/u on [0, 1].
double simpson_mean(double alpha) {
  const int n = 20000;
  auto f = [alpha](double s) { return bexp(1.0, s, 1.0, alpha); };
  double acc = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / n);
  return acc / (3.0 * n);
}

TEST(MeanFraction, ClosedFormMatchesQuadrature) {
  for (double a : {0.1, 0.5, 0.7, 0.9, 0.95}) EXPECT_NEAR(mean_bexp_fraction(a), simpson_mean(a), 1e-10);
  // alpha -> 0 tends to the linear ramp's 1/2
  EXPECT_NEAR(mean_bexp_fraction(1e-4), 0.5, 1e-4);
}

TEST(MeanFraction, DiscreteScheduleAgrees) {
  for (double a : {0.5, 0.7, 0.9}) {
    EXPECT_NEAR(discrete_mean_fraction(448, 1 << 16, a), mean_bexp_fraction(a), 1e-3);
  }
}

TEST(Lambda, RatioRule) {
  ScheduleConfig c;
  EXPECT_DOUBLE_EQ(lambda_coeff(c, 96), 1.5);
  EXPECT_EQ(lambda_coeff(c, 0), 0.0);
  EXPECT_DOUBLE_EQ(lambda_coeff(c, 448), 7.0);
  for (std::size_t u = 0; u <= 448; u += 7) {
    EXPECT_EQ(lambda_coeff(c, u) / lambda_coeff(c, 448), static_cast<double>(u) / 448.0);
  }
}

TEST(CosineLr, EndpointsAndMonotone) {
  EXPECT_EQ(cosine_lr(0.03, 0, 100), 0.03);
  EXPECT_NEAR(cosine_lr(1.0, 100, 100), std::cos(7.0 * std::numbers::pi / 16.0), 1e-15);
  EXPECT_NEAR(cosine_lr(1.0, 100, 100), 0.19509, 1e-5);
  double prev = 1.0;
  for (int t = 0; t <= 100; ++t) {
    const double v = cosine_lr(1.0, t, 100);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(ScheduleConfig, Validation) {
  ScheduleConfig c;
  c.validate();
  c.alpha = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.alpha = 0.7;
  c.u = 100;
  EXPECT_THROW(c.validate(), ConfigError);
  c.mu = 0;
  c.validate();
  c.T = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ConvexMap, SpotValues) {
  EXPECT_EQ(convex_map(0.0), 0.0);
  EXPECT_DOUBLE_EQ(convex_map(0.5), 1.0 / 3.0);
  EXPECT_EQ(convex_map(1.0), 1.0);
}

TEST(Cpl, RecordAboveTauOnly) {
  CplState s(4, 3, 0.95);
  s.record(0, 1, 0.99);
  EXPECT_EQ(s.sigma()[1], 1u);
  EXPECT_EQ(s.unused_count(), 3u);
  const auto before = s;
  s.record(2, 2, 0.5);
  EXPECT_EQ(s, before);
  s.record(2, 2, 0.95);  // strict
  EXPECT_EQ(s, before);
  EXPECT_THROW(s.record(4, 0, 0.99), Error);
}

TEST(Cpl, FlipMovesCountBetweenClasses) {
  CplState s(3, 3, 0.9);
  s.record(1, 0, 0.95);
  s.record(1, 2, 0.97);
  EXPECT_EQ(s.sigma()[0], 0u);
  EXPECT_EQ(s.sigma()[2], 1u);
  EXPECT_EQ(s.unused_count(), 2u);
}

TEST(Cpl, ThresholdHandExample) {
  CplState s(150, 3, 0.95);
  for (std::size_t i = 0; i < 100; ++i) s.record(i, 0, 0.99);
  for (std::size_t i = 100; i < 150; ++i) s.record(i, 1, 0.99);
  const auto t = s.thresholds();
  EXPECT_DOUBLE_EQ(t[0], 0.95);
  EXPECT_NEAR(t[1], 0.95 / 3.0, 1e-15);
  EXPECT_NEAR(t[1], 0.31667, 1e-5);
  EXPECT_EQ(t[2], 0.0);
}

TEST(Cpl, DisabledIsFlat) {
  CplState s(10, 4, 0.95, false);
  s.record(0, 1, 0.99);
  for (double t : s.thresholds()) EXPECT_EQ(t, 0.95);
}

TEST(Cpl, UnusedDominatesEarly) {
  CplState s(100, 2, 0.95);
  s.record(0, 0, 0.99);
  const auto t = s.thresholds();
  EXPECT_NEAR(t[0], convex_map(1.0 / 99.0) * 0.95, 1e-15);
}

TEST(Cpl, ConservationAndBoundsUnderRandomUpdates) {
  Rng rng(42);
  for (int seq = 0; seq < 200; ++seq) {
    const std::size_t U = 1 + rng.below(40), C = 2 + rng.below(6);
    CplState s(U, C, 0.5 + 0.5 * rng.uniform());
    for (int k = 0; k < 100; ++k) {
      s.record(rng.below(U), static_cast<int>(rng.below(C)), rng.uniform());
      std::vector<std::size_t> recount(C, 0);
      std::size_t unused = 0;
      for (int p : s.predictions()) {
        if (p < 0) {
          ++unused;
        } else {
          ++recount[static_cast<std::size_t>(p)];
        }
      }
      ASSERT_EQ(recount, s.sigma());
      ASSERT_EQ(unused, s.unused_count());
      for (double t : s.thresholds()) {
        ASSERT_GE(t, 0.0);
        ASSERT_LE(t, s.tau());
      }
    }
  }
}

}  // namespace
}  // namespace fastfix
