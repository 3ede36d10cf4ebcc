#include "fastfix/scenarios/federated.hpp"

#include <algorithm>
#include <memory>
#include <thread>

#include <nlohmann/json.hpp>

#include "fastfix/error.hpp"
#include "fastfix/gradcore/optim.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {

void FederatedConfig::validate() const {
  if (n_clients == 0) throw ConfigError("federated.n_clients", "must be positive");
  if (n_groups == 0) throw ConfigError("federated.n_groups", "must be positive");
  if (n_clients % n_groups != 0) {
    throw ConfigError("federated.n_clients", "must be divisible by n_groups");
  }
  if (clients_per_round != n_groups) {
    throw ConfigError("federated.clients_per_round", "must equal n_groups");
  }
  if (rounds == 0) throw ConfigError("federated.rounds", "must be positive");
  if (labeled_per_client == 0) {
    throw ConfigError("federated.labeled_per_client", "must be positive");
  }
  if (!(dominant_fraction >= 0.0 && dominant_fraction <= 1.0)) {
    throw ConfigError("federated.dominant_fraction", "must lie in [0, 1]");
  }
}

std::pair<std::size_t, std::size_t> group_class_block(std::size_t g, std::size_t groups,
                                                      std::size_t classes) {
  return {g * classes / groups, (g + 1) * classes / groups};
}

std::vector<ClientState> partition_noniid(const Dataset& dataset, const FederatedConfig& cfg) {
  cfg.validate();
  const std::size_t n = dataset.size();
  if (n < cfg.n_clients) {
    throw DataError("partition: dataset of " + std::to_string(n) + " samples is smaller than " +
                    std::to_string(cfg.n_clients) + " clients");
  }
  const std::size_t G = cfg.n_groups, C = dataset.class_count;
  auto group_of_class = [&](int c) {
    for (std::size_t g = 0; g < G; ++g) {
      const auto [lo, hi] = group_class_block(g, G, C);
      if (static_cast<std::size_t>(c) >= lo && static_cast<std::size_t>(c) < hi) return g;
    }
    return G - 1;
  };

  // Each group's pool, split into its own-block samples and foreign ones.
  std::vector<std::vector<std::size_t>> block(G), own(G), foreign(G);
  for (std::size_t i = 0; i < n; ++i) block[group_of_class(dataset.labels[i])].push_back(i);
  for (std::size_t g = 0; g < G; ++g) {
    Rng rng(derive_seed(cfg.seed, "partition_block", g));
    rng.shuffle(block[g].begin(), block[g].end());
    const auto keep = G == 1 ? block[g].size()
                             : static_cast<std::size_t>(std::llround(
                                   cfg.dominant_fraction * static_cast<double>(block[g].size())));
    own[g].assign(block[g].begin(), block[g].begin() + static_cast<std::ptrdiff_t>(keep));
    std::size_t k = 0;
    for (std::size_t j = keep; j < block[g].size(); ++j, ++k) {
      const std::size_t dest = (g + 1 + k % (G - 1)) % G;
      foreign[dest].push_back(block[g][j]);
    }
  }

  const std::size_t per_group = cfg.n_clients / G;
  std::vector<ClientState> clients(cfg.n_clients);
  for (std::size_t g = 0; g < G; ++g) {
    Rng rng(derive_seed(cfg.seed, "partition_group", g));
    rng.shuffle(own[g].begin(), own[g].end());
    rng.shuffle(foreign[g].begin(), foreign[g].end());
    for (std::size_t k = 0; k < per_group; ++k) {
      auto& c = clients[g * per_group + k];
      c.client_id = g * per_group + k;
      c.group_id = g;
    }
    // Deal own and foreign samples separately so every client keeps the
    // group's mixture.
    for (std::size_t j = 0; j < own[g].size(); ++j) {
      clients[g * per_group + j % per_group].unlabeled.push_back(own[g][j]);
    }
    for (std::size_t j = 0; j < foreign[g].size(); ++j) {
      clients[g * per_group + (per_group - 1 - j % per_group)].unlabeled.push_back(foreign[g][j]);
    }
  }
  for (auto& c : clients) {
    if (c.unlabeled.empty()) {
      throw DataError("partition: client " + std::to_string(c.client_id) + " received no data");
    }
    std::sort(c.unlabeled.begin(), c.unlabeled.end());
    auto pool = c.unlabeled;
    Rng rng(derive_seed(cfg.seed, "partition_labeled", c.client_id));
    rng.shuffle(pool.begin(), pool.end());
    pool.resize(std::min(pool.size(), cfg.labeled_per_client));
    std::sort(pool.begin(), pool.end());
    c.labeled = std::move(pool);
  }
  return clients;
}

Model fedavg(std::span<const Model* const> models) {
  if (models.empty()) throw Error("fedavg: no models");
  const Model& first = *models.front();
  for (const Model* m : models) {
    if (!(m->spec() == first.spec())) throw ShapeError("fedavg", "model architectures differ");
  }
  Model out = first;
  const double inv = 1.0 / static_cast<double>(models.size());
  auto average = [&](auto pick, Tensor& dst) {
    std::vector<double> acc(dst.size(), 0.0);
    for (const Model* m : models) {
      const Tensor& src = pick(*m);
      if (src.shape() != dst.shape()) throw ShapeError("fedavg", "tensor shapes differ");
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += src[k];
    }
    for (std::size_t k = 0; k < acc.size(); ++k) dst[k] = static_cast<float>(acc[k] * inv);
  };
  for (std::size_t i = 0; i < out.parameters().size(); ++i) {
    auto& p = out.parameters()[i];
    average([i](const Model& m) -> const Tensor& { return m.parameters()[i].value; }, p.value);
    average([i](const Model& m) -> const Tensor& { return m.parameters()[i].ema; }, p.ema);
    p.grad.reset();
  }
  for (std::size_t i = 0; i < out.buffers().size(); ++i) {
    average([i](const Model& m) -> const Tensor& { return m.buffers()[i].value; },
            out.buffers()[i].value);
  }
  return out;
}

Model fedavg(std::span<const Model> models) {
  std::vector<const Model*> ptrs;
  for (const auto& m : models) ptrs.push_back(&m);
  return fedavg(std::span<const Model* const>(ptrs));
}

std::vector<std::size_t> sample_clients(const FederatedConfig& cfg, std::size_t round) {
  const std::size_t per_group = cfg.n_clients / cfg.n_groups;
  std::vector<std::size_t> out;
  Rng rng(derive_seed(cfg.seed, "round", round));
  for (std::size_t g = 0; g < cfg.n_groups; ++g) out.push_back(g * per_group + rng.below(per_group));
  return out;
}

FederatedLog run_federated(const FederatedConfig& cfg, const TrainConfig& train_cfg,
                           const Dataset& train_set, const Dataset& test_set, std::ostream* jsonl) {
  cfg.validate();
  TrainConfig tc = train_cfg;
  tc.schedule.T = static_cast<std::uint64_t>(cfg.rounds) * std::max<std::size_t>(cfg.local_iterations, 1);
  tc.validate();
  train_set.validate();
  test_set.validate();

  const auto clients = partition_noniid(train_set, cfg);
  const auto stats = channel_stats(train_set);
  Model global(model_spec_for(tc, train_set), derive_seed(tc.seed, "init"));

  // Learners (CPL state and cursors) persist across the rounds a client joins.
  std::vector<std::unique_ptr<SslLearner>> learners(clients.size());

  FederatedLog log;
  log.ledger = PassLedger(train_set.size());
  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    const auto sampled = sample_clients(cfg, r);
    for (const auto id : sampled) {
      if (!learners[id]) {
        learners[id] = std::make_unique<SslLearner>(tc, train_set, stats, clients[id].labeled,
                                                    clients[id].unlabeled,
                                                    derive_seed(tc.seed, "client", id));
      }
    }

    std::vector<Model> local(sampled.size(), global);
    std::vector<PassLedger> ledgers(sampled.size(), PassLedger(train_set.size()));
    std::vector<std::exception_ptr> errors(sampled.size());
    std::vector<std::size_t> confident(sampled.size(), 0), drawn(sampled.size(), 0);
    auto work = [&](std::size_t k) {
      try {
        Sgd opt(local[k], tc.sgd);
        for (std::size_t i = 0; i < cfg.local_iterations; ++i) {
          const auto t = static_cast<std::uint64_t>(r) * cfg.local_iterations + i;
          const auto s = learners[sampled[k]]->step(local[k], opt, t);
          ledgers[k].record_iteration(s.l_t, s.u_t, s.n_confident);
          confident[k] += s.n_confident;
          drawn[k] += s.u_t;
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (cfg.parallel && sampled.size() > 1) {
      std::vector<std::thread> threads;
      for (std::size_t k = 0; k < sampled.size(); ++k) threads.emplace_back(work, k);
      for (auto& th : threads) th.join();
    } else {
      for (std::size_t k = 0; k < sampled.size(); ++k) work(k);
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    global = fedavg(std::span<const Model>(local));
    for (std::size_t k = 0; k < sampled.size(); ++k) {
      log.ledger.merge(ledgers[k]);
      log.confident_sum += confident[k];
      log.drawn_sum += drawn[k];
    }

    RoundRecord rec;
    rec.round = r;
    rec.sampled_clients = sampled;
    rec.global_accuracy = evaluate(global, test_set, stats, true, tc.eval_batch);
    rec.cumulative_epochs = log.ledger.epochs();
    rec.forward_total = log.ledger.forward_total();
    rec.backward_total = log.ledger.backward_total();
    if (jsonl) {
      nlohmann::ordered_json j;
      j["round"] = rec.round;
      j["sampled_clients"] = rec.sampled_clients;
      j["global_accuracy"] = rec.global_accuracy;
      j["cumulative_epochs"] = rec.cumulative_epochs;
      *jsonl << j.dump() << '\n';
    }
    log.rounds.push_back(rec);
    log.final_accuracy = rec.global_accuracy;
    if (tc.target_accuracy && rec.global_accuracy >= *tc.target_accuracy) {
      log.target_hit = rec;
      break;
    }
  }
  return log;
}

}  // namespace fastfix
