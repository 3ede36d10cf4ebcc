#include "fastfix/gradcore/model.hpp"

#include <cmath>

#include "fastfix/error.hpp"
#include "fastfix/rng.hpp"

namespace fastfix {
namespace {

std::string block_name(std::size_t i) { return "block" + std::to_string(i + 1); }

}  // namespace

template <typename T>
BasicModel<T>::BasicModel(ModelSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  if (spec_.widths.empty()) throw ShapeError("model", "at least one block required");
  if (spec_.classes < 2) throw ShapeError("model", "at least two classes required");
  const std::size_t pools = spec_.widths.size() - 1;
  const std::size_t factor = std::size_t{1} << pools;
  if (spec_.height % factor || spec_.width % factor || spec_.height == 0 || spec_.width == 0) {
    throw ShapeError("model", "input " + std::to_string(spec_.height) + "x" +
                                  std::to_string(spec_.width) + " not divisible by " +
                                  std::to_string(factor) + " for pooling");
  }

  Rng rng(derive_seed(seed, "model.init"));
  std::size_t cin = spec_.in_channels;
  for (std::size_t i = 0; i < spec_.widths.size(); ++i) {
    const std::size_t cout = spec_.widths[i];
    const std::string b = block_name(i);
    BasicTensor<T> w({cout, cin, 3, 3});
    const double stddev = std::sqrt(2.0 / static_cast<double>(cin * 9));
    for (auto& v : w.data()) v = static_cast<T>(rng.normal() * stddev);
    params_.push_back({b + ".conv.weight", std::move(w), std::nullopt, {}});
    params_.push_back({b + ".bn.weight", BasicTensor<T>({cout}, T{1}), std::nullopt, {}});
    params_.push_back({b + ".bn.bias", BasicTensor<T>({cout}, T{0}), std::nullopt, {}});
    buffers_.push_back({b + ".bn.running_mean", BasicTensor<T>({cout}, T{0})});
    buffers_.push_back({b + ".bn.running_var", BasicTensor<T>({cout}, T{1})});
    cin = cout;
  }
  BasicTensor<T> fc({spec_.classes, cin});
  const double bound = 1.0 / std::sqrt(static_cast<double>(cin));
  for (auto& v : fc.data()) v = static_cast<T>(rng.uniform(-bound, bound));
  params_.push_back({"fc.weight", std::move(fc), std::nullopt, {}});
  params_.push_back({"fc.bias", BasicTensor<T>({spec_.classes}, T{0}), std::nullopt, {}});
  for (auto& p : params_) p.ema = p.value;
}

template <typename T>
Var<T> BasicModel<T>::forward(Tape<T>& tape, const BasicTensor<T>& batch,
                              const ForwardOptions& options) {
  const auto& s = batch.shape();
  if (s.size() != 4 || s[1] != spec_.in_channels || s[2] != spec_.height ||
      s[3] != spec_.width || s[0] == 0) {
    throw ShapeError("input", "batch " + shape_str(s) + " does not match [N, " +
                                  std::to_string(spec_.in_channels) + ", " +
                                  std::to_string(spec_.height) + ", " +
                                  std::to_string(spec_.width) + "]");
  }

  const bool differentiable = tape.recording() && !options.use_ema;
  auto leaf = [&](std::size_t idx) {
    auto& p = params_[idx];
    if (!differentiable) return tape.parameter(options.use_ema ? p.ema : p.value, nullptr);
    if (!p.grad) p.grad.emplace();
    return tape.parameter(p.value, &*p.grad);
  };

  ops::BatchNormOptions bn;
  bn.training = options.training;
  bn.momentum = spec_.bn_momentum;

  Var<T> x = tape.constant(ops::nchw_to_cnhw(batch));
  std::size_t pi = 0, bi = 0;
  for (std::size_t i = 0; i < spec_.widths.size(); ++i) {
    const std::string b = block_name(i);
    try {
      x = ops::conv2d(x, leaf(pi));
      BasicTensor<T>* rm = nullptr;
      BasicTensor<T>* rv = nullptr;
      if (!options.training || options.update_stats) {
        rm = &buffers_[bi].value;
        rv = &buffers_[bi + 1].value;
      }
      x = ops::batch_norm(x, leaf(pi + 1), leaf(pi + 2), rm, rv, bn);
      x = ops::relu(x);
      if (i + 1 < spec_.widths.size()) x = ops::max_pool2(x);
    } catch (const ShapeError& e) {
      throw ShapeError(b, e.what());
    }
    pi += 3;
    bi += 2;
  }
  try {
    x = ops::global_avg_pool(x);
    return ops::linear(x, leaf(pi), leaf(pi + 1));
  } catch (const ShapeError& e) {
    throw ShapeError("fc", e.what());
  }
}

template <typename T>
BasicTensor<T> BasicModel<T>::logits(const BasicTensor<T>& batch, const ForwardOptions& options) {
  Tape<T> tape(false);
  return forward(tape, batch, options).value();
}

template <typename T>
void BasicModel<T>::backward(Var<T> loss) {
  loss.tape->backward(loss);
  for (auto& p : params_) {
    if (!p.grad) p.grad.emplace();
    if (p.grad->empty()) *p.grad = BasicTensor<T>(p.value.shape());
  }
}

template <typename T>
void BasicModel<T>::zero_grad() {
  for (auto& p : params_) p.grad = BasicTensor<T>(p.value.shape());
}

template <typename T>
void BasicModel<T>::clear_grad() {
  for (auto& p : params_) p.grad.reset();
}

template <typename T>
std::size_t BasicModel<T>::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  throw Error("model: no parameter named '" + std::string(name) + "'");
}

template <typename T>
Parameter<T>& BasicModel<T>::parameter(std::string_view name) {
  return params_[index_of(name)];
}

template <typename T>
const Parameter<T>& BasicModel<T>::parameter(std::string_view name) const {
  return params_[index_of(name)];
}

template <typename T>
BasicTensor<T>& BasicModel<T>::buffer(std::string_view name) {
  for (auto& b : buffers_) {
    if (b.name == name) return b.value;
  }
  throw Error("model: no buffer named '" + std::string(name) + "'");
}

template <typename T>
std::size_t BasicModel<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

template class BasicModel<float>;
template class BasicModel<double>;
template class BasicModel<long double>;

}  // namespace fastfix
