#pragma once

#include <vector>

#include "fastfix/gradcore/model.hpp"

namespace fastfix {

struct SgdConfig {
  double lr = 0.03;
  double momentum = 0.9;
  double weight_decay = 5e-4;
};

/// SGD with heavy-ball momentum and L2 weight decay:
///   v <- m*v + g + wd*w;  w <- w - lr*v
template <typename T>
class BasicSgd {
 public:
  BasicSgd(const BasicModel<T>& model, SgdConfig config);

  const SgdConfig& config() const noexcept { return config_; }
  void set_lr(double lr);

  /// Applies one update and clears the gradients. Throws if any parameter
  /// lacks a populated gradient.
  void step(BasicModel<T>& model);

  const std::vector<BasicTensor<T>>& velocity() const noexcept { return velocity_; }

 private:
  SgdConfig config_;
  std::vector<BasicTensor<T>> velocity_;
};

using Sgd = BasicSgd<float>;

/// ema <- decay*ema + (1 - decay)*w, elementwise, decay in [0, 1).
template <typename T>
void ema_update(BasicModel<T>& model, double decay);

extern template class BasicSgd<float>;
extern template class BasicSgd<double>;

}  // namespace fastfix
