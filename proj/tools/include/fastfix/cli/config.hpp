#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fastfix/dataio/dataset.hpp"
#include "fastfix/engine/trainer.hpp"
#include "fastfix/scenarios/federated.hpp"
#include "fastfix/scenarios/streaming.hpp"

namespace fastfix::cli {

enum class DataSource { synthetic, cifar10, file };

struct DataConfig {
  DataSource source = DataSource::synthetic;
  /// CIFAR-10 directory, or an FFDS training file.
  std::string path;
  /// FFDS test file when source is "file".
  std::string test_path;
  std::size_t n_labeled = 40;
  bool labeled_also_unlabeled = true;

  /// Synthetic generator settings; `synth.count` and `synth.seed` are
  /// replaced by the train/test values below.
  SynthOptions synth;
  std::size_t synth_train = 4000;
  std::size_t synth_test = 1000;
  std::uint64_t synth_train_seed = 11;
  std::uint64_t synth_test_seed = 12;
  std::uint64_t synth_pattern_seed = 7;
};

/// Every random stream derives from `seed`; the train and federated seeds
/// are overwritten with it.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "runs/default";
  DataConfig data;
  TrainConfig train;
  FederatedConfig federated;
  StreamPlan stream;
};

/// Equality of the serialised forms.
bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses a JSON config. An empty or whitespace-only document yields the
/// defaults. Unknown keys, type mismatches and constraint violations raise
/// ConfigError with the dotted key path.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const RunConfig& config);

/// Constraint checks, including existence of referenced data paths.
void validate(const RunConfig& config);

struct LoadedData {
  Dataset train;
  Dataset test;
};

LoadedData load_data(const RunConfig& config);

}  // namespace fastfix::cli
