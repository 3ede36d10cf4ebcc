#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fastfix {

/// Mixes a 64-bit value (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from the root seed, a purpose tag,
/// an iteration and an index: root ^ hash(purpose, t, index).
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose,
                          std::uint64_t t = 0, std::uint64_t index = 0) noexcept;

/// Thin wrapper over mt19937_64 with portable conversions. The standard
/// distributions are implementation-defined, so they are not used for
/// anything that ends up in a metrics stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller.
  double normal();

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fastfix
