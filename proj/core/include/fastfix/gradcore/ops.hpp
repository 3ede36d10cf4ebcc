#pragma once

#include <span>

#include "fastfix/gradcore/tape.hpp"

// Differentiable ops. Image activations use a channel-major [C, N, H, W]
// layout so that convolution lowers to one GEMM per layer and per-channel
// normalization statistics are contiguous.
namespace fastfix::ops {

template <typename T>
Var<T> add(Var<T> a, Var<T> b);

template <typename T>
Var<T> mul(Var<T> a, Var<T> b);

template <typename T>
Var<T> scale(Var<T> a, T factor);

template <typename T>
Var<T> square(Var<T> a);

/// Sum of all elements, shape [1].
template <typename T>
Var<T> sum(Var<T> a);

template <typename T>
Var<T> relu(Var<T> x);

/// Same-padded, stride-1 convolution without bias.
/// x: [Cin, N, H, W], weight: [Cout, Cin, k, k] with k odd.
template <typename T>
Var<T> conv2d(Var<T> x, Var<T> weight);

struct BatchNormOptions {
  bool training = true;
  double momentum = 0.9;  // running ← momentum·running + (1 − momentum)·batch
  double eps = 1e-5;
};

/// Per-channel normalization over [C, N, H, W]. In training mode batch
/// statistics are used and, when the running pointers are non-null, the
/// running estimates are updated (variance unbiased).
template <typename T>
Var<T> batch_norm(Var<T> x, Var<T> gamma, Var<T> beta,
                  BasicTensor<T>* running_mean, BasicTensor<T>* running_var,
                  const BatchNormOptions& options);

/// 2x2 max pooling, stride 2. H and W must be even.
template <typename T>
Var<T> max_pool2(Var<T> x);

/// [C, N, H, W] -> [C, N].
template <typename T>
Var<T> global_avg_pool(Var<T> x);

/// Affine head. x: [C, N], weight: [K, C], bias: [K] -> [N, K].
template <typename T>
Var<T> linear(Var<T> x, Var<T> weight, Var<T> bias);

/// Rows [begin, end) of a [N, K] matrix.
template <typename T>
Var<T> slice_rows(Var<T> x, std::size_t begin, std::size_t end);

/// Σ_i w_i · (−log softmax(logits_i)[target_i]) / normalizer, computed with
/// max subtraction. Empty `weights` means all ones; normalizer ≤ 0 means N.
template <typename T>
Var<T> softmax_cross_entropy(Var<T> logits, std::span<const int> targets,
                             std::span<const T> weights = {},
                             T normalizer = T{0});

/// Row-wise softmax of an [N, K] matrix (no graph).
template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits);

/// [N, C, H, W] -> [C, N, H, W].
template <typename T>
BasicTensor<T> nchw_to_cnhw(const BasicTensor<T>& x);

}  // namespace fastfix::ops
