#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fastfix/gradcore/ops.hpp"
#include "fastfix/gradcore/tape.hpp"
#include "fastfix/gradcore/tensor.hpp"

namespace fastfix {

/// Desk-scale CNN: one block per entry of `widths`, each
/// conv3x3 -> batch norm -> ReLU, with 2x2 max pooling between blocks,
/// then global average pooling and an affine head.
struct ModelSpec {
  std::size_t in_channels = 3;
  std::size_t height = 32;
  std::size_t width = 32;
  std::size_t classes = 10;
  std::vector<std::size_t> widths{32, 64, 128};
  double bn_momentum = 0.9;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

template <typename T>
struct Parameter {
  std::string name;
  BasicTensor<T> value;
  /// Engaged and non-empty once a backward pass has populated it.
  std::optional<BasicTensor<T>> grad;
  BasicTensor<T> ema;
};

template <typename T>
struct NamedBuffer {
  std::string name;
  BasicTensor<T> value;
};

struct ForwardOptions {
  bool use_ema = false;
  /// Batch statistics in normalization layers (otherwise running estimates).
  bool training = true;
  /// Update running estimates when training.
  bool update_stats = true;
};

template <typename T>
class BasicModel {
 public:
  BasicModel(ModelSpec spec, std::uint64_t seed);

  const ModelSpec& spec() const noexcept { return spec_; }

  /// Logits [N, classes] for an [N, C, H, W] batch. Parameters are
  /// registered as tape leaves; on a recording tape the graph is kept for
  /// backward. EMA weights are never differentiated.
  Var<T> forward(Tape<T>& tape, const BasicTensor<T>& batch, const ForwardOptions& options);

  /// Convenience: logits on a non-recording tape.
  BasicTensor<T> logits(const BasicTensor<T>& batch, const ForwardOptions& options);

  /// Runs the reverse sweep from `loss` and leaves every parameter with a
  /// gradient buffer (zeros where unreachable).
  void backward(Var<T> loss);

  void zero_grad();
  void clear_grad();

  std::vector<Parameter<T>>& parameters() noexcept { return params_; }
  const std::vector<Parameter<T>>& parameters() const noexcept { return params_; }
  std::vector<NamedBuffer<T>>& buffers() noexcept { return buffers_; }
  const std::vector<NamedBuffer<T>>& buffers() const noexcept { return buffers_; }

  Parameter<T>& parameter(std::string_view name);
  const Parameter<T>& parameter(std::string_view name) const;
  BasicTensor<T>& buffer(std::string_view name);

  std::size_t parameter_count() const;

  template <typename U>
  BasicModel<U> cast() const {
    BasicModel<U> out(spec_, 0);
    for (std::size_t i = 0; i < params_.size(); ++i) {
      out.parameters()[i].value = params_[i].value.template cast<U>();
      out.parameters()[i].ema = params_[i].ema.template cast<U>();
    }
    for (std::size_t i = 0; i < buffers_.size(); ++i) {
      out.buffers()[i].value = buffers_[i].value.template cast<U>();
    }
    return out;
  }

 private:
  std::size_t index_of(std::string_view name) const;

  ModelSpec spec_;
  std::vector<Parameter<T>> params_;
  std::vector<NamedBuffer<T>> buffers_;
};

using Model = BasicModel<float>;

extern template class BasicModel<float>;
extern template class BasicModel<double>;
extern template class BasicModel<long double>;

}  // namespace fastfix
