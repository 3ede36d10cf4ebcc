#include "fastfix/gradcore/optim.hpp"

#include "fastfix/error.hpp"

namespace fastfix {
namespace {

void check_config(const SgdConfig& c) {
  if (!(c.lr > 0.0)) throw Error("sgd: learning rate must be positive");
  if (c.momentum < 0.0 || c.momentum >= 1.0) throw Error("sgd: momentum must be in [0, 1)");
  if (c.weight_decay < 0.0) throw Error("sgd: weight decay must be nonnegative");
}

}  // namespace

template <typename T>
BasicSgd<T>::BasicSgd(const BasicModel<T>& model, SgdConfig config) : config_(config) {
  check_config(config_);
  for (const auto& p : model.parameters()) velocity_.emplace_back(p.value.shape());
}

template <typename T>
void BasicSgd<T>::set_lr(double lr) {
  if (!(lr > 0.0)) throw Error("sgd: learning rate must be positive");
  config_.lr = lr;
}

template <typename T>
void BasicSgd<T>::step(BasicModel<T>& model) {
  auto& params = model.parameters();
  if (params.size() != velocity_.size()) throw ShapeError("sgd", "parameter count changed");
  for (const auto& p : params) {
    if (!p.grad || p.grad->empty()) {
      throw Error("sgd: parameter '" + p.name + "' has no gradient");
    }
    if (p.grad->shape() != p.value.shape()) throw ShapeError(p.name, "gradient shape mismatch");
  }
  const T lr = static_cast<T>(config_.lr);
  const T m = static_cast<T>(config_.momentum);
  const T wd = static_cast<T>(config_.weight_decay);
  for (std::size_t i = 0; i < params.size(); ++i) {
    T* w = params[i].value.raw();
    const T* g = params[i].grad->raw();
    T* v = velocity_[i].raw();
    for (std::size_t k = 0; k < params[i].value.size(); ++k) {
      v[k] = m * v[k] + g[k] + wd * w[k];
      w[k] -= lr * v[k];
    }
  }
  model.clear_grad();
}

template <typename T>
void ema_update(BasicModel<T>& model, double decay) {
  if (decay < 0.0 || decay >= 1.0) throw Error("ema: decay must be in [0, 1)");
  const T d = static_cast<T>(decay);
  const T one_minus = static_cast<T>(1.0 - decay);
  for (auto& p : model.parameters()) {
    if (p.ema.shape() != p.value.shape()) throw ShapeError(p.name, "ema shape mismatch");
    T* e = p.ema.raw();
    const T* w = p.value.raw();
    for (std::size_t k = 0; k < p.value.size(); ++k) e[k] = d * e[k] + one_minus * w[k];
  }
}

template class BasicSgd<float>;
template class BasicSgd<double>;
template void ema_update(BasicModel<float>&, double);
template void ema_update(BasicModel<double>&, double);

}  // namespace fastfix
