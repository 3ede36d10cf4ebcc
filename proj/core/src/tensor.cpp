#include "fastfix/gradcore/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "fastfix/error.hpp"

namespace fastfix {

std::size_t shape_numel(const Shape& shape) noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_str(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, T fill)
    : shape_(std::move(shape)), data_(shape_numel(shape_), fill) {}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, std::vector<T> data)
    : BasicTensor(std::move(shape), Buffer<T>(data.begin(), data.end())) {}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, Buffer<T> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_numel(shape_)) {
    throw ShapeError("tensor", "data length " + std::to_string(data_.size()) +
                                   " does not match shape " + shape_str(shape_));
  }
}

template <typename T>
BasicTensor<T> BasicTensor<T>::uninitialized(Shape shape) {
  Buffer<T> data;
  data.resize(shape_numel(shape));
  return BasicTensor(std::move(shape), std::move(data));
}

template <typename T>
void BasicTensor<T>::fill(T value) {
  std::fill(data_.begin(), data_.end(), value);
}

template <typename T>
void BasicTensor<T>::reshape(Shape shape) {
  if (shape_numel(shape) != data_.size()) {
    throw ShapeError("reshape", shape_str(shape_) + " -> " + shape_str(shape));
  }
  shape_ = std::move(shape);
}

template <typename T>
bool BasicTensor<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](T v) { return std::isfinite(v); });
}

template class BasicTensor<float>;
template class BasicTensor<double>;
template class BasicTensor<long double>;

}  // namespace fastfix
