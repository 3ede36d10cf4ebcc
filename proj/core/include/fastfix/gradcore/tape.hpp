#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "fastfix/gradcore/tensor.hpp"

namespace fastfix {

template <typename T>
class Tape;

/// Handle to a node recorded on a Tape.
template <typename T>
struct Var {
  Tape<T>* tape = nullptr;
  std::uint32_t id = 0;

  const BasicTensor<T>& value() const { return tape->value(*this); }
  const Shape& shape() const { return value().shape(); }
};

/// Reverse-mode tape. Nodes are appended in evaluation order, so a reverse
/// sweep visits every node after all of its consumers.
///
/// A tape built with `record = false` evaluates values only; calling
/// backward on anything it produced is an error.
template <typename T>
class Tape {
 public:
  using TensorT = BasicTensor<T>;
  using BackwardFn = std::function<void(Tape&)>;

  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const noexcept { return record_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  Var<T> constant(TensorT value);

  /// Leaf that aliases `value` (must outlive the tape). After backward the
  /// accumulated gradient is added into `grad_sink`, which is resized to
  /// `value`'s shape if empty.
  Var<T> parameter(const TensorT& value, TensorT* grad_sink);

  /// Appends an op result. `backward` is dropped when no input needs a
  /// gradient or recording is off.
  Var<T> push(TensorT value, std::initializer_list<Var<T>> inputs,
              BackwardFn backward);

  const TensorT& value(Var<T> v) const;
  bool requires_grad(Var<T> v) const { return nodes_.at(v.id).requires_grad; }

  /// Gradient buffer for a node, zero-initialised on first touch.
  TensorT& grad(Var<T> v);
  bool has_grad(Var<T> v) const { return !nodes_.at(v.id).grad.empty(); }

  /// Seeds d(loss)/d(loss) = 1 and sweeps. `loss` must be a scalar that
  /// depends on at least one recorded parameter.
  void backward(Var<T> loss);

 private:
  struct Node {
    TensorT owned;
    const TensorT* external = nullptr;
    TensorT grad;
    TensorT* sink = nullptr;
    bool requires_grad = false;
    BackwardFn backward;
  };

  std::deque<Node> nodes_;
  bool record_;
  bool swept_ = false;
};

extern template class Tape<float>;
extern template class Tape<double>;
extern template class Tape<long double>;

}  // namespace fastfix
