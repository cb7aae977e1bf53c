#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "hcolor/colorspace.hpp"

namespace hcolor {

inline constexpr double kPsnrCapDb = 100.0;

struct EvalReport {
  double rmse_ab = 0.0;
  double psnr_mean_db = 0.0;
  std::vector<double> per_image_psnr;
  std::vector<std::pair<double, double>> cumulative_curve;  ///< (threshold, fraction of pixels)
  std::size_t images = 0;
  std::size_t pixels = 0;
};

/// Per-pixel Euclidean distance in alpha-beta space.
std::vector<double> alphabeta_errors(const RgbImage& pred, const RgbImage& gt);

/// Mean over all pixels of all images of the per-pixel alpha-beta error.
double rmse_ab(std::span<const RgbImage> preds, std::span<const RgbImage> gts);

/// -10 log10(||y - y_hat||^2 / 3N), capped at kPsnrCapDb.
double psnr(const RgbImage& pred, const RgbImage& gt);
/// Arithmetic mean over images, plus the per-image values.
std::pair<double, std::vector<double>> psnr(std::span<const RgbImage> preds, std::span<const RgbImage> gts);

/// Fraction of all pixels whose alpha-beta error is <= each threshold.
std::vector<std::pair<double, double>> cumulative_curve(std::span<const RgbImage> preds, std::span<const RgbImage> gts,
                                                        std::span<const double> thresholds);

/// Thresholds 0, 0.01, ..., 3.0.
std::vector<double> default_thresholds();

EvalReport evaluate(std::span<const RgbImage> preds, std::span<const RgbImage> gts,
                    std::span<const double> thresholds);

/// Gray input replicated to RGB: the prediction of a colorizer that adds no color.
RgbImage no_colorization(const RgbImage& gt);

/// key=value lines.
void write_report(std::ostream& os, const EvalReport& report);
/// Two columns: threshold fraction.
void write_curve(std::ostream& os, const EvalReport& report);

}  // namespace hcolor
