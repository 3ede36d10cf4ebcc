#include "fastfix/gradcore/tape.hpp"

#include "fastfix/error.hpp"

namespace fastfix {

template <typename T>
Var<T> Tape<T>::constant(TensorT value) {
  Node node;
  node.owned = std::move(value);
  nodes_.push_back(std::move(node));
  return {this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename T>
Var<T> Tape<T>::parameter(const TensorT& value, TensorT* grad_sink) {
  Node node;
  node.external = &value;
  node.sink = grad_sink;
  node.requires_grad = record_ && grad_sink != nullptr;
  nodes_.push_back(std::move(node));
  return {this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename T>
Var<T> Tape<T>::push(TensorT value, std::initializer_list<Var<T>> inputs,
                     BackwardFn backward) {
  Node node;
  node.owned = std::move(value);
  if (record_) {
    for (const auto& in : inputs) {
      if (nodes_.at(in.id).requires_grad) {
        node.requires_grad = true;
        break;
      }
    }
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return {this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename T>
const BasicTensor<T>& Tape<T>::value(Var<T> v) const {
  const Node& node = nodes_.at(v.id);
  return node.external ? *node.external : node.owned;
}

template <typename T>
BasicTensor<T>& Tape<T>::grad(Var<T> v) {
  Node& node = nodes_.at(v.id);
  if (node.grad.empty()) node.grad = TensorT(value(v).shape());
  return node.grad;
}

template <typename T>
void Tape<T>::backward(Var<T> loss) {
  if (!record_ || !nodes_.at(loss.id).requires_grad) {
    throw Error("backward: no recorded graph reaches this value");
  }
  if (swept_) throw Error("backward: tape already swept");
  if (value(loss).size() != 1) {
    throw ShapeError("backward", "loss must be scalar, got " +
                                     shape_str(value(loss).shape()));
  }
  swept_ = true;
  grad(loss)[0] = T{1};
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.requires_grad || node.grad.empty() || !node.backward) continue;
    node.backward(*this);
    node.backward = nullptr;
  }
  for (auto& node : nodes_) {
    if (!node.sink || node.grad.empty()) continue;
    if (node.sink->empty()) {
      *node.sink = std::move(node.grad);
      continue;
    }
    auto dst = node.sink->data();
    auto src = node.grad.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
}

template class Tape<float>;
template class Tape<double>;
template class Tape<long double>;

}  // namespace fastfix
