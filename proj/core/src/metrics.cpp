#include "hcolor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace hcolor {

namespace {

void check_pairs(std::span<const RgbImage> preds, std::span<const RgbImage> gts) {
  if (preds.size() != gts.size()) throw std::invalid_argument("metrics: prediction/ground-truth count mismatch");
  for (std::size_t m = 0; m < preds.size(); ++m)
    if (preds[m].width() != gts[m].width() || preds[m].height() != gts[m].height())
      throw std::invalid_argument("metrics: dimension mismatch in image pair " + std::to_string(m));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<double> alphabeta_errors(const RgbImage& pred, const RgbImage& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw std::invalid_argument("metrics: dimension mismatch");
  std::vector<double> out(pred.pixel_count());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const AlphaBetaPixel p = rgb_to_alphabeta(pred.pixel(n));
    const AlphaBetaPixel g = rgb_to_alphabeta(gt.pixel(n));
    out[n] = std::hypot(p.alpha - g.alpha, p.beta - g.beta);
  }
  return out;
}

double rmse_ab(std::span<const RgbImage> preds, std::span<const RgbImage> gts) {
  check_pairs(preds, gts);
  double total = 0.0;
  std::size_t pixels = 0;
  for (std::size_t m = 0; m < preds.size(); ++m) {
    for (double e : alphabeta_errors(preds[m], gts[m])) total += e;
    pixels += preds[m].pixel_count();
  }
  return pixels ? total / static_cast<double>(pixels) : 0.0;
}

double psnr(const RgbImage& pred, const RgbImage& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw std::invalid_argument("metrics: dimension mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < pred.data().size(); ++i) {
    const double d = pred.data()[i] - gt.data()[i];
    sq += d * d;
  }
  const double mse = sq / static_cast<double>(3 * pred.pixel_count());
  if (mse <= 1e-10) return kPsnrCapDb;
  return std::min(-10.0 * std::log10(mse), kPsnrCapDb);
}

std::pair<double, std::vector<double>> psnr(std::span<const RgbImage> preds, std::span<const RgbImage> gts) {
  check_pairs(preds, gts);
  std::vector<double> per_image;
  double sum = 0.0;
  for (std::size_t m = 0; m < preds.size(); ++m) {
    per_image.push_back(psnr(preds[m], gts[m]));
    sum += per_image.back();
  }
  return {per_image.empty() ? 0.0 : sum / static_cast<double>(per_image.size()), per_image};
}

std::vector<std::pair<double, double>> cumulative_curve(std::span<const RgbImage> preds, std::span<const RgbImage> gts,
                                                        std::span<const double> thresholds) {
  check_pairs(preds, gts);
  std::vector<double> errors;
  for (std::size_t m = 0; m < preds.size(); ++m) {
    const auto e = alphabeta_errors(preds[m], gts[m]);
    errors.insert(errors.end(), e.begin(), e.end());
  }
  std::sort(errors.begin(), errors.end());
  std::vector<std::pair<double, double>> curve;
  for (double t : thresholds) {
    const auto count = std::upper_bound(errors.begin(), errors.end(), t) - errors.begin();
    curve.emplace_back(t, errors.empty() ? 1.0 : static_cast<double>(count) / static_cast<double>(errors.size()));
  }
  return curve;
}

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 300; ++i) t.push_back(i * 0.01);
  return t;
}

EvalReport evaluate(std::span<const RgbImage> preds, std::span<const RgbImage> gts, std::span<const double> thresholds) {
  EvalReport r;
  r.rmse_ab = rmse_ab(preds, gts);
  std::tie(r.psnr_mean_db, r.per_image_psnr) = psnr(preds, gts);
  r.cumulative_curve = cumulative_curve(preds, gts, thresholds);
  r.images = preds.size();
  for (const auto& p : preds) r.pixels += p.pixel_count();
  return r;
}

RgbImage no_colorization(const RgbImage& gt) { return gray_to_rgb(desaturate(gt)); }

void write_report(std::ostream& os, const EvalReport& report) {
  os << "images=" << report.images << "\n";
  os << "pixels=" << report.pixels << "\n";
  os << "rmse_ab=" << format_double(report.rmse_ab) << "\n";
  os << "psnr_mean_db=" << format_double(report.psnr_mean_db) << "\n";
  for (std::size_t i = 0; i < report.per_image_psnr.size(); ++i)
    os << "psnr_db." << i << "=" << format_double(report.per_image_psnr[i]) << "\n";
}

void write_curve(std::ostream& os, const EvalReport& report) {
  for (const auto& [t, f] : report.cumulative_curve) os << format_double(t) << " " << format_double(f) << "\n";
}

}  // namespace hcolor
