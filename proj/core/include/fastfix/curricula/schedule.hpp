#pragma once

#include <cstddef>
#include <cstdint>

namespace fastfix {

struct ScheduleConfig {
  std::size_t l = 64;
  std::size_t u = 448;
  std::size_t mu = 7;
  std::uint64_t T = 1 << 20;
  double alpha = 0.7;
  bool cbs_enabled = false;
  double base_lambda = 1.0;

  /// Throws ConfigError on u != mu*l, alpha outside [0,1), T = 0 or l = 0.
  void validate() const;

  friend bool operator==(const ScheduleConfig&, const ScheduleConfig&) = default;
};

/// Bounded-exponential growth curve
///   u * (1 - (1 - t/T) / ((1 - alpha) + alpha * (1 - t/T)))
double bexp(double u, double t, double T, double alpha);

/// Unlabeled batch size at iteration t: rounded bexp clamped to [0, u]
/// when the curriculum is on, u otherwise.
std::size_t unlabeled_batch_size(const ScheduleConfig& cfg, std::uint64_t t);

/// Continuous mean of bexp/u over [0, T]. alpha = 0 is rejected (the limit
/// there is 1/2).
double mean_bexp_fraction(double alpha);

/// Discrete mean of unlabeled_batch_size/u over t = 0..T-1 with the
/// curriculum on.
double discrete_mean_fraction(std::size_t u, std::uint64_t T, double alpha);

/// base_lambda * u_t / l.
double lambda_coeff(const ScheduleConfig& cfg, std::size_t u_t);

/// lr0 * cos(7*pi*t / (16*T)).
double cosine_lr(double lr0, std::uint64_t t, std::uint64_t T);

}  // namespace fastfix
