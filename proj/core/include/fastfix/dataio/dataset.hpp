#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fastfix/gradcore/tensor.hpp"

namespace fastfix {

inline constexpr int kUnlabeled = -1;

/// Image classification dataset, channels-first, values in [0, 1].
/// A label of kUnlabeled marks a sample without ground truth.
struct Dataset {
  std::string name;
  std::size_t channels = 3;
  std::size_t height = 32;
  std::size_t width = 32;
  std::size_t class_count = 10;
  std::vector<float> images;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t image_size() const noexcept { return channels * height * width; }
  std::span<const float> image(std::size_t i) const {
    return {images.data() + i * image_size(), image_size()};
  }

  /// Throws DataError when an invariant is broken.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Per-channel statistics of a dataset, used to standardise network inputs.
struct ChannelStats {
  std::vector<float> mean;
  std::vector<float> stddev;
};

ChannelStats channel_stats(const Dataset& dataset);

/// Copies the selected samples into an [N, C, H, W] tensor.
Tensor gather_images(const Dataset& dataset, std::span<const std::size_t> indices);

std::vector<int> gather_labels(const Dataset& dataset, std::span<const std::size_t> indices);

/// Subset with the given samples, in order.
Dataset subset(const Dataset& dataset, std::span<const std::size_t> indices);

enum class CifarSplit { train, test };

/// Reads the CIFAR-10 binary distribution (data_batch_{1..5}.bin or
/// test_batch.bin; 3073-byte records: label byte then R, G, B planes).
Dataset load_cifar10_binary(const std::filesystem::path& directory,
                            CifarSplit split = CifarSplit::train);

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  std::size_t classes = 10;
  std::size_t height = 32;
  std::size_t width = 32;
  std::size_t channels = 3;
  /// Strength of the class-independent nuisance pattern mixed into each image.
  double nuisance = 0.6;
  /// Standard deviation of per-pixel Gaussian noise.
  double noise = 0.08;
  /// Maximum circular shift of the class pattern, in pixels.
  std::size_t max_shift = 1;
};

/// Class-conditional synthetic images: a per-class pattern, randomly
/// shifted and rescaled, blended with one of a pool of shared nuisance
/// patterns and pixel noise. Classes are balanced (first count % classes
/// classes get one extra sample). Deterministic in `seed`; class patterns
/// depend on (pattern_seed, classes, shape) only, so train and test sets generated
/// with different seeds but the same `pattern_seed` share classes.
Dataset synth_generate(const SynthOptions& options, std::uint64_t pattern_seed);

inline constexpr char kDatasetMagic[4] = {'F', 'F', 'D', 'S'};

/// Layout: "FFDS", u32 n, u32 channels, u32 height, u32 width,
/// u32 class count, n x i32 labels, n*C*H*W f32 values; little-endian.
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace fastfix
