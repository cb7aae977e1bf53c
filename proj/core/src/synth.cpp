#include "hcolor/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hcolor/rng.hpp"

namespace hcolor {

namespace {

// Zero-sum offsets, so tinting leaves (R+G+B)/3 unchanged before clipping.
constexpr std::array<double, 3> kWarm{0.55, 0.05, -0.60};
constexpr std::array<double, 3> kCool{-0.50, -0.05, 0.55};

struct Blob {
  double cx, cy, radius, amplitude;
};

}  // namespace

RgbImage synth_image(std::uint64_t seed, std::uint64_t index, const SynthOptions& options) {
  Rng rng(mix_seed(seed, index, 0x5e));
  const int w = options.width;
  const int h = options.height;
  const double base = rng.uniform(0.4, 0.6);
  const double fx = rng.uniform(0.1, 0.4), fy = rng.uniform(0.1, 0.4), phase = rng.uniform(0.0, 6.283185307179586);

  std::vector<Blob> blobs(2 + rng.below(3));
  for (auto& b : blobs) {
    b.cx = rng.uniform(0.0, w);
    b.cy = rng.uniform(0.0, h);
    b.radius = rng.uniform(2.5, 6.0);
    b.amplitude = (rng.below(2) ? 1.0 : -1.0) * rng.uniform(0.25, 0.38);
  }
  const bool image_warm = rng.below(2) == 1;

  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double offset = 0.0;
      for (const auto& b : blobs) {
        const double d2 = (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy);
        offset += b.amplitude * std::exp(-d2 / (2.0 * b.radius * b.radius));
      }
      const double texture = 0.03 * std::sin(fx * x + fy * y + phase);
      const double g = std::clamp(base + offset + texture, 0.05, 0.95);
      const double strength = std::min(1.0, std::abs(offset) / 0.3) * 0.4;
      const bool warm = options.ambiguous ? image_warm : offset > 0.0;
      const auto& tint = warm ? kWarm : kCool;
      img.set_pixel(x, y,
                    {std::clamp(g + strength * tint[0], 0.0, 1.0), std::clamp(g + strength * tint[1], 0.0, 1.0),
                     std::clamp(g + strength * tint[2], 0.0, 1.0)});
    }
  }
  return img;
}

std::vector<RgbImage> synth_corpus(std::uint64_t seed, int count, const SynthOptions& options, std::uint64_t first) {
  std::vector<RgbImage> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(synth_image(seed, first + static_cast<std::uint64_t>(i), options));
  return out;
}

}  // namespace hcolor
