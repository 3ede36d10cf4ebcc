#include "fastfix/augment/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fastfix/error.hpp"

namespace fastfix {
namespace {

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

// Nearest-neighbour resampling through an inverse map; out-of-range source
// coordinates clamp to the border.
template <typename Map>
Image resample(const Image& in, Map inverse) {
  Image out = in;
  const auto h = static_cast<long>(in.height), w = static_cast<long>(in.width);
  for (std::size_t y = 0; y < in.height; ++y) {
    for (std::size_t x = 0; x < in.width; ++x) {
      const auto [sy, sx] = inverse(static_cast<double>(y), static_cast<double>(x));
      const long iy = std::clamp(std::lround(sy), 0L, h - 1);
      const long ix = std::clamp(std::lround(sx), 0L, w - 1);
      for (std::size_t c = 0; c < in.channels; ++c) {
        out.at(c, y, x) = in.at(c, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
      }
    }
  }
  return out;
}

// Luma for three channels, plain mean otherwise.
std::vector<float> grayscale(const Image& in) {
  const std::size_t plane = in.height * in.width;
  std::vector<float> g(plane, 0.0f);
  if (in.channels == 3) {
    constexpr float kW[3] = {0.299f, 0.587f, 0.114f};
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t k = 0; k < plane; ++k) g[k] += kW[c] * in.pixels[c * plane + k];
    }
  } else {
    for (std::size_t c = 0; c < in.channels; ++c) {
      for (std::size_t k = 0; k < plane; ++k) g[k] += in.pixels[c * plane + k];
    }
    for (auto& v : g) v /= static_cast<float>(in.channels);
  }
  return g;
}

// out = base + factor·(in − base), the PIL ImageEnhance blend.
Image blend(const Image& in, const std::vector<float>& base_per_pixel, double factor) {
  Image out = in;
  const std::size_t plane = in.height * in.width;
  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t k = 0; k < plane; ++k) {
      const float b = base_per_pixel[k];
      out.pixels[c * plane + k] = clamp01(b + factor * (in.pixels[c * plane + k] - b));
    }
  }
  return out;
}

Image autocontrast(const Image& in) {
  Image out = in;
  const std::size_t plane = in.height * in.width;
  for (std::size_t c = 0; c < in.channels; ++c) {
    const auto first = in.pixels.begin() + static_cast<std::ptrdiff_t>(c * plane);
    const auto [lo, hi] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(plane));
    if (*hi - *lo < 1e-6f) continue;
    const float l = *lo, scale = 1.0f / (*hi - *lo);
    for (std::size_t k = 0; k < plane; ++k) {
      out.pixels[c * plane + k] = clamp01((in.pixels[c * plane + k] - l) * scale);
    }
  }
  return out;
}

Image equalize(const Image& in) {
  Image out = in;
  const std::size_t plane = in.height * in.width;
  for (std::size_t c = 0; c < in.channels; ++c) {
    std::array<std::size_t, 256> hist{};
    auto bin = [](float v) {
      return static_cast<std::size_t>(std::clamp(std::lround(v * 255.0f), 0L, 255L));
    };
    for (std::size_t k = 0; k < plane; ++k) ++hist[bin(in.pixels[c * plane + k])];
    std::array<std::size_t, 256> cdf{};
    std::size_t run = 0;
    for (std::size_t b = 0; b < 256; ++b) cdf[b] = run += hist[b];
    std::size_t cdf_min = 0;
    for (std::size_t b = 0; b < 256; ++b) {
      if (hist[b]) {
        cdf_min = cdf[b];
        break;
      }
    }
    if (plane == cdf_min) continue;  // single grey level
    const double denom = static_cast<double>(plane - cdf_min);
    for (std::size_t k = 0; k < plane; ++k) {
      const auto b = bin(in.pixels[c * plane + k]);
      out.pixels[c * plane + k] = clamp01(static_cast<double>(cdf[b] - cdf_min) / denom);
    }
  }
  return out;
}

Image sharpness(const Image& in, double factor) {
  // Smoothed copy with the 3x3 kernel [1 1 1; 1 5 1; 1 1 1] / 13 on the
  // interior; border pixels are left as-is.
  Image smooth = in;
  if (in.height >= 3 && in.width >= 3) {
    for (std::size_t c = 0; c < in.channels; ++c) {
      for (std::size_t y = 1; y + 1 < in.height; ++y) {
        for (std::size_t x = 1; x + 1 < in.width; ++x) {
          double s = 4.0 * in.at(c, y, x);
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              s += in.at(c, static_cast<std::size_t>(static_cast<long>(y) + dy),
                         static_cast<std::size_t>(static_cast<long>(x) + dx));
            }
          }
          smooth.at(c, y, x) = static_cast<float>(s / 13.0);
        }
      }
    }
  }
  Image out = in;
  for (std::size_t k = 0; k < in.pixels.size(); ++k) {
    out.pixels[k] = clamp01(smooth.pixels[k] + factor * (in.pixels[k] - smooth.pixels[k]));
  }
  return out;
}

}  // namespace

void AugmentPolicy::validate() const {
  if (magnitude < 0 || magnitude > 30) throw Error("augment: magnitude must be in [0, 30]");
  if (!(cutout_fraction >= 0.0 && cutout_fraction <= 0.5)) {
    throw Error("augment: cutout_fraction must be in [0, 0.5]");
  }
}

WeakDraw draw_weak(Rng& rng, std::size_t height, std::size_t width) {
  WeakDraw d;
  d.flip = rng.bernoulli(0.5);
  const auto my = static_cast<std::uint64_t>(height / 8);
  const auto mx = static_cast<std::uint64_t>(width / 8);
  d.shift_y = static_cast<int>(rng.below(2 * my + 1)) - static_cast<int>(my);
  d.shift_x = static_cast<int>(rng.below(2 * mx + 1)) - static_cast<int>(mx);
  return d;
}

Image flip_horizontal(const Image& in) {
  Image out = in;
  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t y = 0; y < in.height; ++y) {
      for (std::size_t x = 0; x < in.width; ++x) {
        out.at(c, y, x) = in.at(c, y, in.width - 1 - x);
      }
    }
  }
  return out;
}

Image translate(const Image& in, int dy, int dx) {
  if (dy == 0 && dx == 0) return in;
  return resample(in, [dy, dx](double y, double x) {
    return std::pair{y - dy, x - dx};
  });
}

Image apply_weak(const Image& image, const WeakDraw& draw) {
  return translate(draw.flip ? flip_horizontal(image) : image, draw.shift_y, draw.shift_x);
}

Image weak_augment(const Image& image, Rng& rng) {
  return apply_weak(image, draw_weak(rng, image.height, image.width));
}

std::string_view strong_op_name(StrongOp op) {
  static constexpr std::array<std::string_view, kStrongOpCount> kNames = {
      "identity",  "autocontrast", "brightness", "color",   "contrast",
      "equalize",  "posterize",    "rotate",     "sharpness", "shear_x",
      "shear_y",   "solarize",     "translate_x", "translate_y"};
  return kNames[static_cast<std::size_t>(op)];
}

Image apply_strong_op(const Image& in, StrongOp op, int magnitude, bool negate) {
  const double level = std::clamp(magnitude, 0, 30) / 30.0;
  const double sign = negate ? -1.0 : 1.0;
  const double enhance = 1.0 + sign * 0.9 * level;  // factor in [0.1, 1.9]
  const double cy = (static_cast<double>(in.height) - 1.0) / 2.0;
  const double cx = (static_cast<double>(in.width) - 1.0) / 2.0;

  switch (op) {
    case StrongOp::identity:
      return in;
    case StrongOp::autocontrast:
      return autocontrast(in);
    case StrongOp::brightness: {
      Image out = in;
      for (auto& v : out.pixels) v = clamp01(v * enhance);
      return out;
    }
    case StrongOp::color:
      return in.channels < 2 ? in : blend(in, grayscale(in), enhance);
    case StrongOp::contrast: {
      const auto g = grayscale(in);
      double mean = 0.0;
      for (const float v : g) mean += v;
      mean /= static_cast<double>(g.size());
      return blend(in, std::vector<float>(g.size(), static_cast<float>(mean)), enhance);
    }
    case StrongOp::equalize:
      return equalize(in);
    case StrongOp::posterize: {
      const int bits = 8 - static_cast<int>(std::lround(4.0 * level));
      const int mask = ~((1 << (8 - bits)) - 1) & 0xff;
      Image out = in;
      for (auto& v : out.pixels) {
        const int q = static_cast<int>(std::clamp(std::lround(v * 255.0f), 0L, 255L));
        v = static_cast<float>(q & mask) / 255.0f;
      }
      return out;
    }
    case StrongOp::rotate: {
      const double theta = sign * 30.0 * level * std::numbers::pi / 180.0;
      const double c = std::cos(theta), s = std::sin(theta);
      return resample(in, [=](double y, double x) {
        const double ry = y - cy, rx = x - cx;
        return std::pair{cy + c * ry - s * rx, cx + s * ry + c * rx};
      });
    }
    case StrongOp::sharpness:
      return sharpness(in, enhance);
    case StrongOp::shear_x: {
      const double k = sign * 0.3 * level;
      return resample(in, [=](double y, double x) { return std::pair{y, x + k * (y - cy)}; });
    }
    case StrongOp::shear_y: {
      const double k = sign * 0.3 * level;
      return resample(in, [=](double y, double x) { return std::pair{y + k * (x - cx), x}; });
    }
    case StrongOp::solarize: {
      const double threshold = 1.0 - level;
      Image out = in;
      for (auto& v : out.pixels) {
        if (v >= threshold) v = 1.0f - v;
      }
      return out;
    }
    case StrongOp::translate_x:
      return translate(in, 0, static_cast<int>(std::lround(sign * 0.3 * level * in.width)));
    case StrongOp::translate_y:
      return translate(in, static_cast<int>(std::lround(sign * 0.3 * level * in.height)), 0);
  }
  return in;
}

Image apply_cutout(const Image& in, std::size_t side, std::size_t top, std::size_t left) {
  Image out = in;
  const std::size_t y1 = std::min(in.height, top + side);
  const std::size_t x1 = std::min(in.width, left + side);
  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t y = top; y < y1; ++y) {
      for (std::size_t x = left; x < x1; ++x) out.at(c, y, x) = 0.5f;
    }
  }
  return out;
}

Image strong_augment(const Image& image, Rng& rng, const AugmentPolicy& policy) {
  Image out = image;
  for (std::size_t i = 0; i < policy.op_count; ++i) {
    const auto op = static_cast<StrongOp>(rng.below(kStrongOpCount));
    const bool negate = rng.bernoulli(0.5);
    out = apply_strong_op(out, op, policy.magnitude, negate);
  }
  const auto side = static_cast<std::size_t>(
      std::floor(policy.cutout_fraction * static_cast<double>(image.height)));
  if (side > 0 && side <= image.height && side <= image.width) {
    const auto top = rng.below(image.height - side + 1);
    const auto left = rng.below(image.width - side + 1);
    out = apply_cutout(out, side, top, left);
  }
  for (auto& v : out.pixels) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

}  // namespace fastfix
