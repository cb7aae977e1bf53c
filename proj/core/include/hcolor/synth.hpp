#pragma once

#include <cstdint>
#include <vector>

#include "hcolor/colorspace.hpp"

namespace hcolor {

/// Procedural training images: a mid-gray textured background with bright
/// and dark Gaussian blobs. Bright blobs are tinted warm and dark blobs cool,
/// with saturation growing with the intensity offset, so color is a function
/// of local intensity. In ambiguous mode each image draws one tint (warm or
/// cool) for all its blobs regardless of brightness.
struct SynthOptions {
  int width = 32;
  int height = 32;
  bool ambiguous = false;
};

RgbImage synth_image(std::uint64_t seed, std::uint64_t index, const SynthOptions& options = {});
/// Images index first..first+count-1 of the stream for seed.
std::vector<RgbImage> synth_corpus(std::uint64_t seed, int count, const SynthOptions& options = {},
                                   std::uint64_t first = 0);

}  // namespace hcolor
