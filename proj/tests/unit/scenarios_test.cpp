#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "fastfix/error.hpp"
#include "fastfix/scenarios/federated.hpp"
#include "fastfix/scenarios/streaming.hpp"

namespace fastfix {
namespace {

Dataset small_set(std::size_t n, std::uint64_t seed) {
  SynthOptions o;
  o.count = n;
  o.height = 8;
  o.width = 8;
  o.seed = seed;
  return synth_generate(o, 3);
}

ModelSpec tiny_spec() {
  ModelSpec s;
  s.height = 8;
  s.width = 8;
  s.classes = 10;
  s.widths = {4, 8};
  return s;
}

TEST(Partition, DisjointCoverAndDominance) {
  const auto ds = small_set(4000, 1);
  FederatedConfig cfg;
  const auto clients = partition_noniid(ds, cfg);
  ASSERT_EQ(clients.size(), 100u);

  std::vector<int> owner(ds.size(), -1);
  std::vector<std::size_t> per_group(4, 0);
  for (const auto& c : clients) {
    ++per_group[c.group_id];
    for (auto i : c.unlabeled) {
      ASSERT_EQ(owner[i], -1) << "index " << i << " assigned twice";
      owner[i] = static_cast<int>(c.client_id);
    }
    EXPECT_EQ(c.labeled.size(), cfg.labeled_per_client);
    for (auto i : c.labeled) {
      EXPECT_TRUE(std::find(c.unlabeled.begin(), c.unlabeled.end(), i) != c.unlabeled.end());
    }
    const auto [lo, hi] = group_class_block(c.group_id, 4, 10);
    std::size_t own = 0;
    for (auto i : c.unlabeled) own += static_cast<std::size_t>(ds.labels[i]) >= lo &&
                                      static_cast<std::size_t>(ds.labels[i]) < hi;
    EXPECT_GE(static_cast<double>(own), 0.7 * static_cast<double>(c.unlabeled.size()))
        << "client " << c.client_id;
  }
  EXPECT_TRUE(std::all_of(owner.begin(), owner.end(), [](int o) { return o >= 0; }));
  EXPECT_EQ(per_group, (std::vector<std::size_t>{25, 25, 25, 25}));
}

TEST(Partition, GroupBlocksTileClasses) {
  std::size_t next = 0;
  for (std::size_t g = 0; g < 4; ++g) {
    const auto [lo, hi] = group_class_block(g, 4, 10);
    EXPECT_EQ(lo, next);
    EXPECT_GT(hi, lo);
    next = hi;
  }
  EXPECT_EQ(next, 10u);
}

TEST(Partition, DeterministicAndSeedSensitive) {
  const auto ds = small_set(800, 2);
  FederatedConfig cfg;
  cfg.n_clients = 8;
  auto a = partition_noniid(ds, cfg);
  auto b = partition_noniid(ds, cfg);
  EXPECT_EQ(a[3].unlabeled, b[3].unlabeled);
  cfg.seed = 9;
  EXPECT_NE(partition_noniid(ds, cfg)[3].unlabeled, a[3].unlabeled);
}

TEST(Partition, TooFewSamplesThrows) {
  const auto ds = small_set(50, 3);
  EXPECT_THROW(partition_noniid(ds, FederatedConfig{}), DataError);
}

TEST(Sampling, OneClientPerGroup) {
  FederatedConfig cfg;
  for (std::size_t r = 0; r < 20; ++r) {
    const auto s = sample_clients(cfg, r);
    ASSERT_EQ(s.size(), 4u);
    std::set<std::size_t> groups;
    for (auto c : s) groups.insert(c / 25);
    EXPECT_EQ(groups.size(), 4u);
  }
}

TEST(FedAvg, MidpointIsExactOnDyadicValues) {
  Model a(tiny_spec(), 1), b(tiny_spec(), 2);
  for (auto* m : {&a, &b}) {
    const float v = m == &a ? 0.25f : 0.75f;
    for (auto& p : m->parameters()) {
      p.value.fill(v);
      p.ema.fill(-v);
    }
    for (auto& buf : m->buffers()) buf.value.fill(2 * v);
  }
  const std::vector<Model> both{a, b};
  const auto avg = fedavg(std::span<const Model>(both));
  for (const auto& p : avg.parameters()) {
    EXPECT_TRUE(std::all_of(p.value.data().begin(), p.value.data().end(), [](float x) { return x == 0.5f; }));
    EXPECT_TRUE(std::all_of(p.ema.data().begin(), p.ema.data().end(), [](float x) { return x == -0.5f; }));
  }
  for (const auto& buf : avg.buffers()) {
    EXPECT_TRUE(std::all_of(buf.value.data().begin(), buf.value.data().end(), [](float x) { return x == 1.0f; }));
  }
}

TEST(FedAvg, IdentityAndOrderIndependence) {
  Model a(tiny_spec(), 1), b(tiny_spec(), 2), c(tiny_spec(), 3);
  const Model* one[] = {&a};
  const auto same = fedavg(std::span<const Model* const>(one));
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    EXPECT_EQ(same.parameters()[i].value, a.parameters()[i].value);
  }
  const Model* abc[] = {&a, &b, &c};
  const Model* cab[] = {&c, &a, &b};
  const auto x = fedavg(std::span<const Model* const>(abc));
  const auto y = fedavg(std::span<const Model* const>(cab));
  for (std::size_t i = 0; i < x.parameters().size(); ++i) {
    EXPECT_EQ(x.parameters()[i].value, y.parameters()[i].value);
    const auto& pa = a.parameters()[i].value;
    const auto& pb = b.parameters()[i].value;
    const auto& pc = c.parameters()[i].value;
    for (std::size_t k = 0; k < pa.size(); ++k) {
      const double mean = (static_cast<double>(pa[k]) + pb[k] + pc[k]) / 3.0;
      EXPECT_NEAR(x.parameters()[i].value[k], mean, 1e-7);
    }
  }
}

TEST(FedAvg, EmptyInputThrows) {
  EXPECT_THROW(fedavg(std::span<const Model>()), Error);
}

TrainConfig tiny_train() {
  TrainConfig c;
  c.widths = {4, 8};
  c.schedule.l = 4;
  c.schedule.mu = 2;
  c.schedule.u = 8;
  c.seed = 1;
  return c;
}

FederatedConfig tiny_fed() {
  FederatedConfig f;
  f.n_clients = 8;
  f.n_groups = 4;
  f.clients_per_round = 4;
  f.rounds = 3;
  f.local_iterations = 2;
  f.labeled_per_client = 4;
  f.seed = 1;
  return f;
}

TEST(Federated, ZeroLocalIterationsLeavesModelUnchanged) {
  const auto tr = small_set(400, 4);
  const auto te = small_set(100, 5);
  auto f = tiny_fed();
  f.local_iterations = 0;
  const auto log = run_federated(f, tiny_train(), tr, te);
  ASSERT_EQ(log.rounds.size(), 3u);
  for (const auto& r : log.rounds) EXPECT_EQ(r.global_accuracy, log.rounds[0].global_accuracy);
  EXPECT_EQ(log.ledger.total_passes(), 0u);
}

TEST(Federated, ThreadedRunsAreDeterministic) {
  const auto tr = small_set(400, 4);
  const auto te = small_set(100, 5);
  auto f = tiny_fed();
  auto c = tiny_train();
  c.schedule.cbs_enabled = true;
  c.cpl_enabled = true;
  std::ostringstream a, b, s;
  run_federated(f, c, tr, te, &a);
  run_federated(f, c, tr, te, &b);
  f.parallel = false;
  run_federated(f, c, tr, te, &s);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), s.str());
}

TEST(Federated, LedgerCountsEveryClient) {
  const auto tr = small_set(400, 4);
  const auto te = small_set(100, 5);
  const auto log = run_federated(tiny_fed(), tiny_train(), tr, te);
  // Vanilla: each client iteration costs l + u + n_conf forward passes.
  const std::uint64_t iterations = 3 * 4 * 2;
  EXPECT_EQ(log.ledger.forward_total() - log.ledger.backward_total(), iterations * 8);
  EXPECT_GE(log.ledger.forward_total(), iterations * 12);
  EXPECT_DOUBLE_EQ(log.rounds.back().cumulative_epochs, log.ledger.epochs());
}

TEST(Streaming, ChunkScheduleIsAStepFunction) {
  const StreamPlan plan;
  const std::uint64_t T = 1000;
  EXPECT_EQ(chunks_visible(plan, 0, T), 1u);
  EXPECT_EQ(chunks_visible(plan, 99, T), 1u);
  EXPECT_EQ(chunks_visible(plan, 100, T), 2u);
  EXPECT_EQ(chunks_visible(plan, 900, T), 10u);
  EXPECT_EQ(chunks_visible(plan, 999, T), 10u);
  std::size_t prev = 0;
  for (std::uint64_t t = 0; t < T; ++t) {
    const auto k = chunks_visible(plan, t, T);
    EXPECT_TRUE(k == prev || k == prev + 1);
    prev = k;
  }
}

TEST(Streaming, VisibleSizes) {
  const StreamPlan plan;
  EXPECT_EQ(visible_size(plan, 1, 4000), 400u);
  EXPECT_EQ(visible_size(plan, 1, 4001), 401u);
  EXPECT_EQ(visible_size(plan, 10, 4001), 4001u);
  for (std::size_t k = 1; k < 10; ++k) {
    EXPECT_LE(visible_size(plan, k, 4001), visible_size(plan, k + 1, 4001));
  }
}

TEST(Streaming, OrderIsBalancedPermutation) {
  const auto ds = small_set(1000, 6);
  const auto order = stream_order(ds.labels, 10, 3);
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
  std::vector<int> count(10, 0);
  for (std::size_t i = 0; i < 100; ++i) ++count[static_cast<std::size_t>(ds.labels[order[i]])];
  EXPECT_EQ(count, std::vector<int>(10, 10));
}

TEST(Streaming, RunIsDeterministic) {
  const auto tr = small_set(200, 7);
  const auto te = small_set(50, 8);
  const auto split = make_ssl_split(tr, 20, 1);
  auto c = tiny_train();
  c.schedule.T = 10;
  c.eval_every = 5;
  std::ostringstream a, b;
  const auto log = run_streaming(c, StreamPlan{}, tr, te, split, &a);
  run_streaming(c, StreamPlan{}, tr, te, split, &b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(log.steps.size(), 10u);
}

}  // namespace
}  // namespace fastfix
