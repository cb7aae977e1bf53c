#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcolor/colorspace.hpp"
#include "hcolor/field.hpp"
#include "hcolor/histo.hpp"
#include "hcolor/rng.hpp"

namespace hcolor {

enum class DecodeMethod { sample, mode, median, expectation };

std::string to_string(DecodeMethod m);
DecodeMethod decode_method_from_string(const std::string& name);

/// How a histogram field becomes a color image. Hue is decoded with `hue`
/// (expectation means the circular expectation); chroma, or both Lab axes,
/// with `chroma`.
struct DecodePolicy {
  DecodeMethod hue = DecodeMethod::expectation;
  DecodeMethod chroma = DecodeMethod::median;
  bool chromatic_fading = true;
  double eta = 0.03;
  std::uint64_t seed = 0;
};

struct HueEstimate {
  double hue = 0.0;
  double magnitude = 0.0;
};

/// Scalar value of a K-bin distribution over `table`. `rng` is only used by
/// DecodeMethod::sample. Throws for the median of a circular table.
double decode_scalar_channel(std::span<const double> dist, const BinTable& table, DecodeMethod method, Rng* rng = nullptr);

/// z = (1/K) sum_k p_k exp(i theta_k); hue = arg(z) / 2pi in [0,1).
HueEstimate circular_hue_expectation(std::span<const double> dist);

/// chroma * min(|z| / eta, 1).
double chromatic_fade(double chroma, double magnitude, double eta);

std::pair<double, double> decode_joint(std::span<const double> dist, const JointBinTable& table, DecodeMethod method,
                                       Rng* rng = nullptr);

/// Decoded chroma (before fading) of every pixel of a hue/chroma field.
std::vector<double> decode_chroma(const HistogramField& field, const DecodePolicy& policy);

/// Color image from a hue/chroma, marginal (a,b) or joint ab field plus the
/// input lightness. Output lightness matches `gray` wherever nothing clamps.
RgbImage render(const HistogramField& field, const GrayImage& gray, const DecodePolicy& policy);

/// Color image from per-pixel Lab (a,b) predictions.
RgbImage render_ab(std::span<const std::pair<double, double>> ab, const GrayImage& gray);

}  // namespace hcolor
