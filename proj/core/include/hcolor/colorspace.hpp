#pragma once

#include <cstddef>
#include <vector>

namespace hcolor {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

/// Row-major interleaved RGB raster, channel values in [0,1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return pixel_count() == 0; }

  Rgb pixel(int x, int y) const { return pixel(index(x, y)); }
  Rgb pixel(std::size_t i) const { return {data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]}; }
  void set_pixel(int x, int y, Rgb c) { set_pixel(index(x, y), c); }
  void set_pixel(std::size_t i, Rgb c) {
    data_[3 * i] = c.r;
    data_[3 * i + 1] = c.g;
    data_[3 * i + 2] = c.b;
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Single-channel lightness raster, values in [0,1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Bicone coordinates. hue is a fraction of a full turn in [0,1), chroma is
/// max-min of RGB, and bicone_lightness is (max+min)/2.
struct HueChromaPixel {
  double hue = 0.0;
  double chroma = 0.0;
  double bicone_lightness = 0.0;
};

struct LabPixel {
  double L_star = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct AlphaBetaPixel {
  double alpha = 0.0;
  double beta = 0.0;
};

inline constexpr double kAlphaBetaEpsilon = 1e-4;

double lightness(Rgb c);
GrayImage desaturate(const RgbImage& img);
RgbImage gray_to_rgb(const GrayImage& gray);

HueChromaPixel rgb_to_huechroma(Rgb c);
/// Chroma above the bicone limit at the given lightness is clipped first.
Rgb huechroma_to_rgb(const HueChromaPixel& px);

AlphaBetaPixel rgb_to_alphabeta(Rgb c);

// CIELAB, D65 white, sRGB transfer curve.
LabPixel rgb_to_lab(Rgb c);
/// Out-of-gamut results are clamped to [0,1].
Rgb lab_to_rgb(const LabPixel& px);

/// Shifts every channel by (L - L_hat) so the prediction's lightness matches
/// the input, then clamps. Throws std::invalid_argument on size mismatch.
RgbImage lightness_correct(const RgbImage& pred, const GrayImage& input_l);

}  // namespace hcolor
