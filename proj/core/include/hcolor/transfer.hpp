#pragma once

#include <span>
#include <vector>

#include "hcolor/colorspace.hpp"
#include "hcolor/decode.hpp"
#include "hcolor/field.hpp"

namespace hcolor {

/// Per-channel reference histograms, aligned with HistogramField::channels().
using TargetHistogramSet = std::vector<std::vector<double>>;
/// Per-channel global log-bias, aligned with HistogramField::channels().
using BiasVector = std::vector<std::vector<double>>;

struct TransferConfig {
  double lambda = 1.0;
  double lr = 1.0;
  int max_iters = 500;
  double tol = 1e-6;
  int max_halvings = 20;
};

struct ChannelTransfer {
  std::vector<double> bias;
  double energy = 0.0;
  double initial_energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<double> energy_trace;
};

struct TransferResult {
  HistogramField posterior;
  BiasVector bias;
  double energy = 0.0;  ///< summed over channels
  std::vector<ChannelTransfer> channels;
};

/// sum_k (p_k - q_k)^2 / (p_k + q_k), skipping bins where p_k + q_k < 1e-12.
double symmetric_chi2(std::span<const double> p, std::span<const double> q);

/// Per-channel monotone quantile map of `values` onto the empirical
/// distribution of `reference` (mid-rank ties, linear interpolation). Values
/// within a relative 1e-9 of each other are treated as tied.
std::vector<double> quantile_map(std::span<const double> values, std::span<const double> reference);

/// Lightness-normalized quantile matching. Each pass divides RGB by lightness,
/// quantile-matches the three channels to the target and multiplies the
/// source lightness back in; passes repeat until the normalized colors are a
/// fixed point (no color moves by 1e-12), so matching the result again leaves
/// it unchanged. Pixels darker than 1e-4 are copied through.
RgbImage quantile_match(const RgbImage& source, const RgbImage& target, int max_passes = 2000);

/// Transfer energy of one channel at bias b; writes dE/db when grad is set.
/// probs is pixel-major N x K.
double transfer_energy(std::span<const double> probs, int bins, std::span<const double> target,
                       std::span<const double> bias, double lambda, std::vector<double>* grad = nullptr);

/// Reweights every pixel distribution as softmax(log p + b) per channel.
/// An empty bias vector for a channel leaves it unchanged.
HistogramField apply_bias(const HistogramField& field, const BiasVector& bias);

/// Fits one global bias per channel by gradient descent with step halving.
TransferResult energy_minimize(const HistogramField& field, const TargetHistogramSet& targets,
                               const TransferConfig& cfg);

/// Reference histograms of a color image in the field's channel coding.
/// The hue histogram is chroma-weighted.
TargetHistogramSet ground_truth_histograms(const RgbImage& img, const HistogramField& like);

/// One render per bias, each with a seed derived from policy.seed.
std::vector<RgbImage> biased_samples(const HistogramField& field, std::span<const BiasVector> biases,
                                     const GrayImage& gray, const DecodePolicy& policy);

/// Hue entropy / ln K times decoded chroma (no fading).
GrayImage uncertainty_map(const HistogramField& field, const DecodePolicy& policy);

/// `count` biases of the given strength that rotate the field's colors
/// through a full turn, starting at `phase` (in turns).
std::vector<BiasVector> rotation_biases(const HistogramField& field, int count, double strength, double phase);

}  // namespace hcolor
