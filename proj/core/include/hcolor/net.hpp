#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcolor/coding.hpp"
#include "hcolor/colorspace.hpp"
#include "hcolor/field.hpp"

namespace hcolor {

/// 'same'-padded convolution followed by a rectifier. The output grid is
/// subsampled by stride * downsample relative to the layer input.
struct ConvLayerSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;
  int stride = 1;
  int downsample = 1;

  int output_stride() const { return stride * downsample; }
  bool operator==(const ConvLayerSpec&) const = default;
};

struct NetConfig {
  std::vector<ConvLayerSpec> layers;
  /// Hypercolumn taps: "data" for the input, "convN" (1-based) for layer outputs.
  std::vector<std::string> taps;
  int head_width = 64;
  std::vector<HeadSpec> heads;
  int samples_per_image = 128;

  /// Throws std::invalid_argument describing the first inconsistency.
  void validate() const;
  int receptive_field() const;
  /// Cumulative stride of feature map `layer` (0 is the input image).
  int map_stride(int layer) const;
  /// Tap names resolved to feature-map indices.
  std::vector<int> tap_layers() const;
  int descriptor_size() const;

  /// 4 conv layers 1->16->32->64->64, x2 downsampling after the first three,
  /// every layer tapped, 64-wide hidden layer.
  static NetConfig desk_scale(const OutputCoding& coding);

  bool operator==(const NetConfig&) const = default;
};

struct ConvLayer {
  ConvLayerSpec spec;
  std::vector<double> weight;  ///< [out][in][ky][kx]
  std::vector<double> bias;
};

struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weight;  ///< [out][in]
  std::vector<double> bias;
};

struct ParamBlock {
  std::string name;
  std::vector<int> shape;
  std::span<double> values;
};

/// Every trainable tensor of the network; also used as a gradient buffer.
struct ModelParams {
  std::vector<ConvLayer> conv;
  DenseLayer hidden;
  std::vector<DenseLayer> heads;

  /// Tensors in declaration order: conv weights/biases, hidden, then heads.
  std::vector<ParamBlock> blocks();
  std::vector<std::pair<std::string, std::vector<int>>> shapes() const;
  std::size_t parameter_count() const;
  ModelParams zeros_like() const;
};

struct Model {
  NetConfig config;
  ModelParams params;
  std::uint64_t seed = 0;
};

/// Channel-major feature map at a fixed stride relative to the image.
struct FeatureMap {
  int channels = 0;
  int width = 0;
  int height = 0;
  int stride = 1;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int c, int w, int h, int s)
      : channels(c), width(w), height(h), stride(s), data(static_cast<std::size_t>(c) * w * h, 0.0) {}

  double at(int c, int x, int y) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  double& at(int c, int x, int y) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
};

/// Index 0 is the input image, index i the output of conv layer i.
using Features = std::vector<FeatureMap>;

/// Four-cell bilinear stencil on a w x h grid, clamped at the edges.
struct Bilinear {
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double w00 = 0.0, w10 = 0.0, w01 = 0.0, w11 = 0.0;  ///< w[x][y]
};

Bilinear bilinear_weights(double u, double v, int width, int height);

/// Xavier-uniform weights, zero biases; deterministic in seed.
Model init_model(const NetConfig& cfg, std::uint64_t seed);

Features forward_features(const Model& model, const GrayImage& img);

/// Bilinearly interpolated feature slices of each tap at image location
/// (x,y), concatenated in tap order. Throws when (x,y) is outside the image.
std::vector<double> gather_hypercolumn(const Features& features, double x, double y, std::span<const int> tap_layers);
/// Adjoint of gather_hypercolumn: accumulates grad into the four cells
/// surrounding (x,y) in every tap.
void scatter_hypercolumn(Features& feature_grads, double x, double y, std::span<const int> tap_layers,
                         std::span<const double> grad);

struct HeadActivations {
  std::vector<double> hidden;
  std::vector<std::vector<double>> outputs;  ///< probabilities, or raw values for regression heads
};

HeadActivations head_forward(const Model& model, std::span<const double> descriptor);
std::vector<std::vector<double>> head_predict(const Model& model, std::span<const double> descriptor);

struct TrainSample {
  GrayImage gray;
  PixelTargets targets;
};

TrainSample make_train_sample(const RgbImage& img, const OutputCoding& coding);

struct BatchGradient {
  double loss = 0.0;
  ModelParams grads;
};

/// Mean loss over cfg.samples_per_image uniformly drawn pixels per image and
/// its gradient with respect to every parameter.
BatchGradient batch_loss_and_grad(const Model& model, std::span<const TrainSample> batch, const OutputCoding& coding,
                                  std::uint64_t seed);

/// One plain SGD step; returns the batch loss before the update.
double train_step(Model& model, std::span<const TrainSample> batch, const OutputCoding& coding, double lr,
                  std::uint64_t seed);

/// Mean squared activation of every conv layer output over the images.
std::vector<double> second_moments(const Model& model, std::span<const GrayImage> images);

/// Rescales each conv layer by m = 1/sqrt(stats[l]) and compensates in its
/// consumers, leaving the network function unchanged.
Model rebalance(const Model& model, std::span<const double> stats);

/// Dense per-pixel outputs of every histogram head.
HistogramField predict_field(const Model& model, const GrayImage& img);

/// Per-pixel Lab (a,b) from a regression head.
std::vector<std::pair<double, double>> predict_ab(const Model& model, const GrayImage& img);

struct TrainOptions {
  int epochs = 10;
  int batch_size = 4;
  double lr = 0.01;
  std::uint64_t seed = 0;
  bool rebalance = true;

  bool operator==(const TrainOptions&) const = default;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
};

/// Initializes, optionally rebalances on the training images, then runs
/// epochs of shuffled mini-batch SGD.
Model train_model(const NetConfig& cfg, const OutputCoding& coding, std::span<const RgbImage> images,
                  const TrainOptions& options, std::vector<EpochStats>* history = nullptr);

}  // namespace hcolor
