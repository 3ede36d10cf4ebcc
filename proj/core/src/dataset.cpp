#include "fastfix/dataio/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"
#include "fastfix/util/binary_io.hpp"

namespace fastfix {

void Dataset::validate() const {
  if (labels.empty()) throw DataError(name + ": dataset is empty");
  if (images.size() != labels.size() * image_size()) {
    throw DataError(name + ": image buffer holds " + std::to_string(images.size()) +
                    " values, expected " + std::to_string(labels.size() * image_size()));
  }
  for (const int y : labels) {
    if (y != kUnlabeled && (y < 0 || static_cast<std::size_t>(y) >= class_count)) {
      throw DataError(name + ": label " + std::to_string(y) + " out of range");
    }
  }
  for (const float v : images) {
    if (!(v >= 0.0f && v <= 1.0f)) throw DataError(name + ": pixel value outside [0, 1]");
  }
}

ChannelStats channel_stats(const Dataset& dataset) {
  ChannelStats stats;
  const std::size_t plane = dataset.height * dataset.width;
  for (std::size_t c = 0; c < dataset.channels; ++c) {
    double s = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const float* p = dataset.images.data() + i * dataset.image_size() + c * plane;
      for (std::size_t k = 0; k < plane; ++k) {
        s += p[k];
        sq += static_cast<double>(p[k]) * p[k];
      }
    }
    const double n = static_cast<double>(dataset.size() * plane);
    const double mean = s / n;
    const double var = std::max(sq / n - mean * mean, 1e-12);
    stats.mean.push_back(static_cast<float>(mean));
    stats.stddev.push_back(static_cast<float>(std::sqrt(var)));
  }
  return stats;
}

Tensor gather_images(const Dataset& dataset, std::span<const std::size_t> indices) {
  auto out = Tensor::uninitialized(
      {indices.size(), dataset.channels, dataset.height, dataset.width});
  const std::size_t sz = dataset.image_size();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto img = dataset.image(indices[i]);
    std::copy(img.begin(), img.end(), out.raw() + i * sz);
  }
  return out;
}

std::vector<int> gather_labels(const Dataset& dataset, std::span<const std::size_t> indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (const auto i : indices) out.push_back(dataset.labels.at(i));
  return out;
}

Dataset subset(const Dataset& dataset, std::span<const std::size_t> indices) {
  Dataset out;
  out.name = dataset.name;
  out.channels = dataset.channels;
  out.height = dataset.height;
  out.width = dataset.width;
  out.class_count = dataset.class_count;
  out.labels = gather_labels(dataset, indices);
  out.images.reserve(indices.size() * dataset.image_size());
  for (const auto i : indices) {
    const auto img = dataset.image(i);
    out.images.insert(out.images.end(), img.begin(), img.end());
  }
  return out;
}

Dataset load_cifar10_binary(const std::filesystem::path& directory, CifarSplit split) {
  constexpr std::size_t kRecord = 3073;
  constexpr std::size_t kPerFile = 10000;
  std::vector<std::string> files;
  if (split == CifarSplit::train) {
    for (int i = 1; i <= 5; ++i) files.push_back("data_batch_" + std::to_string(i) + ".bin");
  } else {
    files.push_back("test_batch.bin");
  }

  Dataset ds;
  ds.name = split == CifarSplit::train ? "cifar10-train" : "cifar10-test";
  ds.channels = 3;
  ds.height = 32;
  ds.width = 32;
  ds.class_count = 10;
  ds.images.reserve(files.size() * kPerFile * 3072);
  ds.labels.reserve(files.size() * kPerFile);

  std::vector<unsigned char> buf(kRecord * kPerFile);
  for (const auto& f : files) {
    const auto path = directory / f;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw DataError("missing CIFAR-10 file '" + path.string() + "' (expected " +
                      std::to_string(buf.size()) + " bytes)");
    }
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
      throw DataError("truncated CIFAR-10 file '" + path.string() + "': read " +
                      std::to_string(in.gcount()) + " of expected " +
                      std::to_string(buf.size()) + " bytes");
    }
    for (std::size_t r = 0; r < kPerFile; ++r) {
      const unsigned char* rec = buf.data() + r * kRecord;
      if (rec[0] >= 10) {
        throw DataError("'" + path.string() + "': record " + std::to_string(r) +
                        " has label byte " + std::to_string(rec[0]));
      }
      ds.labels.push_back(rec[0]);
      for (std::size_t k = 1; k < kRecord; ++k) ds.images.push_back(rec[k] / 255.0f);
    }
  }
  return ds;
}

namespace {

// Smooth zero-mean pattern: a handful of coloured Gaussian blobs.
std::vector<float> smooth_pattern(Rng& rng, std::size_t c, std::size_t h, std::size_t w,
                                  std::size_t blobs) {
  std::vector<float> out(c * h * w, 0.0f);
  for (std::size_t b = 0; b < blobs; ++b) {
    const double cy = rng.uniform(0.0, static_cast<double>(h));
    const double cx = rng.uniform(0.0, static_cast<double>(w));
    const double sigma = rng.uniform(0.12, 0.3) * static_cast<double>(std::min(h, w));
    std::vector<double> colour(c);
    for (auto& v : colour) v = rng.uniform(-1.0, 1.0);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double dy = static_cast<double>(y) - cy, dx = static_cast<double>(x) - cx;
        const double g = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
        for (std::size_t ch = 0; ch < c; ++ch) {
          out[(ch * h + y) * w + x] += static_cast<float>(colour[ch] * g);
        }
      }
    }
  }
  // Zero mean, unit max amplitude.
  double mean = 0.0;
  for (const float v : out) mean += v;
  mean /= static_cast<double>(out.size());
  float peak = 1e-6f;
  for (auto& v : out) {
    v = static_cast<float>(v - mean);
    peak = std::max(peak, std::abs(v));
  }
  for (auto& v : out) v /= peak;
  return out;
}

}  // namespace

Dataset synth_generate(const SynthOptions& o, std::uint64_t pattern_seed) {
  if (o.classes < 2) throw DataError("synthetic: at least two classes required");
  if (o.count < o.classes) throw DataError("synthetic: count must be at least the class count");
  if (o.height == 0 || o.width == 0 || o.channels == 0) throw DataError("synthetic: empty shape");

  const std::size_t c = o.channels, h = o.height, w = o.width;
  const std::size_t sz = c * h * w;
  constexpr std::size_t kNuisancePool = 24;

  Rng pattern_rng(derive_seed(pattern_seed, "synth.patterns"));
  std::vector<std::vector<float>> class_patterns, nuisance;
  for (std::size_t k = 0; k < o.classes; ++k) {
    class_patterns.push_back(smooth_pattern(pattern_rng, c, h, w, 3));
  }
  for (std::size_t k = 0; k < kNuisancePool; ++k) {
    nuisance.push_back(smooth_pattern(pattern_rng, c, h, w, 2));
  }

  Dataset ds;
  ds.name = "synthetic";
  ds.channels = c;
  ds.height = h;
  ds.width = w;
  ds.class_count = o.classes;
  ds.labels.resize(o.count);
  for (std::size_t i = 0; i < o.count; ++i) ds.labels[i] = static_cast<int>(i % o.classes);
  Rng rng(derive_seed(o.seed, "synth.samples"));
  rng.shuffle(ds.labels.begin(), ds.labels.end());

  ds.images.resize(o.count * sz);
  const auto shift_span = 2 * o.max_shift + 1;
  for (std::size_t i = 0; i < o.count; ++i) {
    const auto& pat = class_patterns[static_cast<std::size_t>(ds.labels[i])];
    const auto& nui = nuisance[rng.below(kNuisancePool)];
    const auto sy = static_cast<std::ptrdiff_t>(rng.below(shift_span)) -
                    static_cast<std::ptrdiff_t>(o.max_shift);
    const auto sx = static_cast<std::ptrdiff_t>(rng.below(shift_span)) -
                    static_cast<std::ptrdiff_t>(o.max_shift);
    const double gain = rng.uniform(0.2, 0.35);
    const double nui_gain = o.nuisance * rng.uniform(0.15, 0.35);
    const double offset = rng.uniform(-0.08, 0.08);
    float* dst = ds.images.data() + i * sz;
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t y = 0; y < h; ++y) {
        const auto yy = static_cast<std::size_t>(
            (static_cast<std::ptrdiff_t>(y + h) - sy) % static_cast<std::ptrdiff_t>(h));
        for (std::size_t x = 0; x < w; ++x) {
          const auto xx = static_cast<std::size_t>(
              (static_cast<std::ptrdiff_t>(x + w) - sx) % static_cast<std::ptrdiff_t>(w));
          const std::size_t k = (ch * h + y) * w + x;
          const double v = 0.5 + offset + gain * pat[(ch * h + yy) * w + xx] +
                           nui_gain * nui[k] + o.noise * rng.normal();
          dst[k] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
      }
    }
  }
  return ds;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out.write(kDatasetMagic, 4);
  binary::put_u32(out, static_cast<std::uint32_t>(ds.size()));
  binary::put_u32(out, static_cast<std::uint32_t>(ds.channels));
  binary::put_u32(out, static_cast<std::uint32_t>(ds.height));
  binary::put_u32(out, static_cast<std::uint32_t>(ds.width));
  binary::put_u32(out, static_cast<std::uint32_t>(ds.class_count));
  for (const int y : ds.labels) binary::put_i32(out, y);
  for (const float v : ds.images) binary::put_f32(out, v);
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kDatasetMagic, 4) != 0) {
    throw DataError("'" + path.string() + "' is not a dataset file (bad magic)");
  }
  Dataset ds;
  ds.name = path.stem().string();
  const auto n = binary::get_u32(in);
  ds.channels = binary::get_u32(in);
  ds.height = binary::get_u32(in);
  ds.width = binary::get_u32(in);
  ds.class_count = binary::get_u32(in);
  ds.labels.resize(n);
  for (auto& y : ds.labels) y = binary::get_i32(in);
  ds.images.resize(static_cast<std::size_t>(n) * ds.image_size());
  for (auto& v : ds.images) v = binary::get_f32(in);
  return ds;
}

}  // namespace fastfix
