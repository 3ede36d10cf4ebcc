#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fastfix/gradcore/model.hpp"
#include "fastfix/gradcore/ops.hpp"
#include "fastfix/rng.hpp"

namespace fastfix::testing {

struct Coordinate {
  std::size_t param = 0;
  std::size_t index = 0;
};

struct GradSample {
  Coordinate at;
  double autodiff = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

/// |a - b| / max(|a|, |b|, floor). The floor keeps coordinates whose true
/// gradient is at rounding level from dominating.
inline double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Training-mode cross entropy without touching running statistics.
template <typename T>
T model_loss(BasicModel<T>& model, const BasicTensor<T>& x, const std::vector<int>& y) {
  Tape<T> tape(false);
  auto logits = model.forward(tape, x, {.use_ema = false, .training = true, .update_stats = false});
  return ops::softmax_cross_entropy<T>(logits, y).value()[0];
}

template <typename T>
void model_gradients(BasicModel<T>& model, const BasicTensor<T>& x, const std::vector<int>& y) {
  Tape<T> tape(true);
  auto logits = model.forward(tape, x, {.use_ema = false, .training = true, .update_stats = false});
  model.backward(ops::softmax_cross_entropy<T>(logits, y));
}

inline std::vector<Coordinate> sample_coordinates(const std::vector<std::size_t>& sizes,
                                                  std::size_t count, std::uint64_t seed) {
  std::size_t total = 0;
  for (auto s : sizes) total += s;
  Rng rng(seed);
  std::vector<Coordinate> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto flat = static_cast<std::size_t>(rng.below(total));
    std::size_t p = 0;
    while (flat >= sizes[p]) flat -= sizes[p++];
    out.push_back({p, flat});
  }
  return out;
}

/// Central difference of the loss in long double, evaluated on an exact
/// widening of the model under test.
template <typename T>
std::vector<GradSample> check_gradients(BasicModel<T>& model, const BasicTensor<T>& x,
                                        const std::vector<int>& y, std::size_t count,
                                        std::uint64_t seed, long double step, double floor) {
  model_gradients(model, x, y);
  auto wide = model.template cast<long double>();
  const auto wx = x.template cast<long double>();

  std::vector<std::size_t> sizes;
  for (const auto& p : model.parameters()) sizes.push_back(p.value.size());
  std::vector<GradSample> out;
  for (const auto& c : sample_coordinates(sizes, count, seed)) {
    auto& w = wide.parameters()[c.param].value[c.index];
    const long double w0 = w;
    w = w0 + step;
    const long double up = model_loss(wide, wx, y);
    w = w0 - step;
    const long double down = model_loss(wide, wx, y);
    w = w0;
    GradSample s;
    s.at = c;
    s.autodiff = static_cast<double>((*model.parameters()[c.param].grad)[c.index]);
    s.numeric = static_cast<double>((up - down) / (2 * step));
    s.rel_error = relative_error(s.autodiff, s.numeric, floor);
    out.push_back(s);
  }
  return out;
}

/// Small random conv net and batch used by the gradient checks.
struct GradFixture {
  ModelSpec spec;
  std::vector<int> labels;

  explicit GradFixture(std::size_t n = 4) {
    spec.in_channels = 3;
    spec.height = 8;
    spec.width = 8;
    spec.classes = 10;
    spec.widths = {8, 16, 32};
    for (std::size_t i = 0; i < n; ++i) labels.push_back(static_cast<int>((3 * i + 1) % 10));
  }

  template <typename T>
  BasicTensor<T> batch(std::uint64_t seed) const {
    BasicTensor<T> x({labels.size(), spec.in_channels, spec.height, spec.width});
    Rng rng(seed);
    for (auto& v : x.data()) v = static_cast<T>(rng.uniform(-1.0, 1.0));
    return x;
  }

  /// Perturbs the normalization affine terms away from (1, 0) so their
  /// gradients are not structurally special.
  template <typename T>
  BasicModel<T> model(std::uint64_t seed) const {
    BasicModel<T> m(spec, seed);
    Rng rng(seed ^ 0x5eedULL);
    for (auto& p : m.parameters()) {
      if (p.name.find(".bn.") != std::string::npos || p.name == "fc.bias") {
        for (auto& v : p.value.data()) v += static_cast<T>(rng.uniform(-0.3, 0.3));
      }
    }
    return m;
  }
};

}  // namespace fastfix::testing
