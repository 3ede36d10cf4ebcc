#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "fastfix/rng.hpp"

namespace fastfix {

/// Channels-first image with values in [0, 1].
struct Image {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> pixels;

  Image() = default;
  Image(std::size_t c, std::size_t h, std::size_t w, std::span<const float> data)
      : channels(c), height(h), width(w), pixels(data.begin(), data.end()) {}

  float& at(std::size_t c, std::size_t y, std::size_t x) {
    return pixels[(c * height + y) * width + x];
  }
  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return pixels[(c * height + y) * width + x];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

struct AugmentPolicy {
  enum class Kind { weak, strong };
  Kind kind = Kind::strong;
  std::size_t op_count = 2;
  int magnitude = 10;  // 0..30
  double cutout_fraction = 0.5;

  void validate() const;
};

// ---- weak pipeline -------------------------------------------------------

struct WeakDraw {
  bool flip = false;
  int shift_y = 0;
  int shift_x = 0;
};

/// Flip with probability 1/2, then shifts in [-⌊H/8⌋, ⌊H/8⌋] × [-⌊W/8⌋, ⌊W/8⌋].
WeakDraw draw_weak(Rng& rng, std::size_t height, std::size_t width);
Image apply_weak(const Image& image, const WeakDraw& draw);
Image weak_augment(const Image& image, Rng& rng);

/// Horizontal mirror.
Image flip_horizontal(const Image& image);
/// Translation with edge (replicate) padding; positive dy moves content down.
Image translate(const Image& image, int dy, int dx);

// ---- strong pipeline -----------------------------------------------------

enum class StrongOp {
  identity,
  autocontrast,
  brightness,
  color,
  contrast,
  equalize,
  posterize,
  rotate,
  sharpness,
  shear_x,
  shear_y,
  solarize,
  translate_x,
  translate_y,
};

inline constexpr std::size_t kStrongOpCount = 14;
std::string_view strong_op_name(StrongOp op);

/// Applies one op at `magnitude` (0..30). `negate` flips the direction of
/// signed ops (brightness, rotation, shears, translations, ...).
Image apply_strong_op(const Image& image, StrongOp op, int magnitude, bool negate);

/// Square of side ⌊fraction·H⌋, top-left corner at (top, left), filled with 0.5.
Image apply_cutout(const Image& image, std::size_t side, std::size_t top, std::size_t left);

/// RandAugment-style: op_count ops drawn uniformly with replacement, each at
/// the policy magnitude with a random direction, then a cutout lying fully
/// inside the image. Output clipped to [0, 1].
Image strong_augment(const Image& image, Rng& rng, const AugmentPolicy& policy);

}  // namespace fastfix
