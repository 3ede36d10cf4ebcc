#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "fastfix/accounting/ledger.hpp"
#include "fastfix/dataio/dataset.hpp"
#include "fastfix/engine/trainer.hpp"
#include "fastfix/gradcore/model.hpp"

namespace fastfix {

struct FederatedConfig {
  std::size_t n_clients = 100;
  std::size_t n_groups = 4;
  std::size_t clients_per_round = 4;
  std::size_t rounds = 50;
  std::size_t local_iterations = 20;
  std::size_t labeled_per_client = 4;
  /// Share of each client's unlabeled shard drawn from its group's classes.
  double dominant_fraction = 0.8;
  std::uint64_t seed = 0;
  /// Run sampled clients of a round on separate threads.
  bool parallel = true;

  void validate() const;

  friend bool operator==(const FederatedConfig&, const FederatedConfig&) = default;
};

/// Shard assignment for one client; indices refer to the training set.
struct ClientState {
  std::size_t client_id = 0;
  std::size_t group_id = 0;
  std::vector<std::size_t> labeled;
  std::vector<std::size_t> unlabeled;
};

/// Classes [lo, hi) dominating group g.
std::pair<std::size_t, std::size_t> group_class_block(std::size_t g, std::size_t groups,
                                                      std::size_t classes);

/// Non-iid partition: clients are split evenly into groups; each group keeps
/// `dominant_fraction` of its class block and receives an equal share of
/// every other block's remainder. Unlabeled shards are disjoint and cover
/// the dataset; each labeled shard is a uniform sample of its own unlabeled
/// shard.
std::vector<ClientState> partition_noniid(const Dataset& dataset, const FederatedConfig& cfg);

/// Unweighted elementwise mean of parameters, EMA shadows and normalization
/// buffers. Accumulates in double.
Model fedavg(std::span<const Model* const> models);
Model fedavg(std::span<const Model> models);

struct RoundRecord {
  std::size_t round = 0;
  std::vector<std::size_t> sampled_clients;
  double global_accuracy = 0.0;
  double cumulative_epochs = 0.0;
  std::uint64_t forward_total = 0;
  std::uint64_t backward_total = 0;
};

struct FederatedLog {
  std::vector<RoundRecord> rounds;
  PassLedger ledger;
  std::optional<RoundRecord> target_hit;
  double final_accuracy = 0.0;
  std::size_t confident_sum = 0;
  std::size_t drawn_sum = 0;
};

/// Clients sampled per round: one uniformly from each group.
std::vector<std::size_t> sample_clients(const FederatedConfig& cfg, std::size_t round);

/// Federated SSL over `rounds` rounds. `train.schedule.T` is replaced by
/// rounds * local_iterations so curricula run over global client time.
FederatedLog run_federated(const FederatedConfig& cfg, const TrainConfig& train,
                           const Dataset& train_set, const Dataset& test_set,
                           std::ostream* jsonl = nullptr);

}  // namespace fastfix
