#include "fastfix/curricula/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fastfix/error.hpp"

namespace fastfix {

void ScheduleConfig::validate() const {
  if (l == 0) throw ConfigError("schedule.l", "must be positive");
  if (T == 0) throw ConfigError("schedule.T", "must be at least 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("schedule.alpha", "must lie in [0, 1)");
  if (mu != 0 && u != mu * l) throw ConfigError("schedule.u", "must equal mu * l");
  if (!std::isfinite(base_lambda) || base_lambda < 0.0) {
    throw ConfigError("schedule.base_lambda", "must be finite and nonnegative");
  }
}

double bexp(double u, double t, double T, double alpha) {
  if (T <= 0.0) throw Error("bexp: T must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error("bexp: alpha must lie in [0, 1)");
  const double r = 1.0 - t / T;
  return u * (1.0 - r / ((1.0 - alpha) + alpha * r));
}

std::size_t unlabeled_batch_size(const ScheduleConfig& cfg, std::uint64_t t) {
  if (!cfg.cbs_enabled) return cfg.u;
  const double v = std::round(bexp(static_cast<double>(cfg.u), static_cast<double>(t),
                                   static_cast<double>(cfg.T), cfg.alpha));
  return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(cfg.u)));
}

double mean_bexp_fraction(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("mean_bexp_fraction: alpha must lie in (0, 1)");
  return 1.0 - 1.0 / alpha + ((1.0 - alpha) / (alpha * alpha)) * std::log(1.0 / (1.0 - alpha));
}

double discrete_mean_fraction(std::size_t u, std::uint64_t T, double alpha) {
  ScheduleConfig cfg;
  cfg.u = u;
  cfg.T = T;
  cfg.alpha = alpha;
  cfg.cbs_enabled = true;
  std::uint64_t total = 0;
  for (std::uint64_t t = 0; t < T; ++t) total += unlabeled_batch_size(cfg, t);
  return static_cast<double>(total) / (static_cast<double>(u) * static_cast<double>(T));
}

double lambda_coeff(const ScheduleConfig& cfg, std::size_t u_t) {
  if (cfg.l == 0) throw Error("lambda_coeff: l must be positive");
  return cfg.base_lambda * static_cast<double>(u_t) / static_cast<double>(cfg.l);
}

double cosine_lr(double lr0, std::uint64_t t, std::uint64_t T) {
  if (T == 0) throw Error("cosine_lr: T must be positive");
  return lr0 * std::cos(7.0 * std::numbers::pi * static_cast<double>(t) /
                        (16.0 * static_cast<double>(T)));
}

}  // namespace fastfix
