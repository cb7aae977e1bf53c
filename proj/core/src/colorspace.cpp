#include "hcolor/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcolor {

namespace {

// D65 reference white.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

constexpr double kLabDelta = 6.0 / 29.0;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
  constexpr double d3 = kLabDelta * kLabDelta * kLabDelta;
  return t > d3 ? std::cbrt(t) : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
  return t > kLabDelta ? t * t * t : 3.0 * kLabDelta * kLabDelta * (t - 4.0 / 29.0);
}

}  // namespace

RgbImage::RgbImage(int width, int height)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3, 0.0) {
  if (width < 0 || height < 0) throw std::invalid_argument("negative image dimensions");
}

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {
  if (width < 0 || height < 0) throw std::invalid_argument("negative image dimensions");
}

double lightness(Rgb c) { return (c.r + c.g + c.b) / 3.0; }

GrayImage desaturate(const RgbImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.pixel_count(); ++i) out[i] = lightness(img.pixel(i));
  return out;
}

RgbImage gray_to_rgb(const GrayImage& gray) {
  RgbImage out(gray.width(), gray.height());
  for (std::size_t i = 0; i < gray.pixel_count(); ++i) out.set_pixel(i, {gray[i], gray[i], gray[i]});
  return out;
}

HueChromaPixel rgb_to_huechroma(Rgb c) {
  const double hi = std::max({c.r, c.g, c.b});
  const double lo = std::min({c.r, c.g, c.b});
  const double chroma = hi - lo;
  HueChromaPixel px{0.0, chroma, 0.5 * (hi + lo)};
  if (chroma <= 0.0) return px;

  double h6;
  if (hi == c.r) {
    h6 = (c.g - c.b) / chroma;
    if (h6 < 0.0) h6 += 6.0;
  } else if (hi == c.g) {
    h6 = (c.b - c.r) / chroma + 2.0;
  } else {
    h6 = (c.r - c.g) / chroma + 4.0;
  }
  double hue = h6 / 6.0;
  if (hue >= 1.0) hue -= 1.0;
  px.hue = hue;
  return px;
}

Rgb huechroma_to_rgb(const HueChromaPixel& px) {
  const double l = clamp01(px.bicone_lightness);
  const double c_max = std::min(2.0 * l, 2.0 * (1.0 - l));
  const double chroma = std::clamp(px.chroma, 0.0, c_max);
  const double m = l - 0.5 * chroma;
  if (chroma <= 0.0) return {l, l, l};

  double hue = px.hue - std::floor(px.hue);
  const double h6 = hue * 6.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(h6, 2.0) - 1.0));
  Rgb out;
  switch (std::min(static_cast<int>(h6), 5)) {
    case 0: out = {chroma, x, 0.0}; break;
    case 1: out = {x, chroma, 0.0}; break;
    case 2: out = {0.0, chroma, x}; break;
    case 3: out = {0.0, x, chroma}; break;
    case 4: out = {x, 0.0, chroma}; break;
    default: out = {chroma, 0.0, x}; break;
  }
  return {clamp01(out.r + m), clamp01(out.g + m), clamp01(out.b + m)};
}

AlphaBetaPixel rgb_to_alphabeta(Rgb c) {
  const double denom = lightness(c) + kAlphaBetaEpsilon;
  return {(c.b - 0.5 * (c.r + c.g)) / denom, (c.r - c.g) / denom};
}

LabPixel rgb_to_lab(Rgb c) {
  const double r = srgb_to_linear(c.r);
  const double g = srgb_to_linear(c.g);
  const double b = srgb_to_linear(c.b);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb lab_to_rgb(const LabPixel& px) {
  const double fy = (px.L_star + 16.0) / 116.0;
  const double fx = fy + px.a / 500.0;
  const double fz = fy - px.b / 200.0;
  const double x = kWhiteX * lab_f_inv(fx);
  const double y = kWhiteY * lab_f_inv(fy);
  const double z = kWhiteZ * lab_f_inv(fz);
  const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  return {clamp01(linear_to_srgb(clamp01(r))), clamp01(linear_to_srgb(clamp01(g))),
          clamp01(linear_to_srgb(clamp01(b)))};
}

RgbImage lightness_correct(const RgbImage& pred, const GrayImage& input_l) {
  if (pred.width() != input_l.width() || pred.height() != input_l.height())
    throw std::invalid_argument("lightness_correct: dimension mismatch");
  RgbImage out(pred.width(), pred.height());
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    const Rgb c = pred.pixel(i);
    const double shift = input_l[i] - lightness(c);
    out.set_pixel(i, {clamp01(c.r + shift), clamp01(c.g + shift), clamp01(c.b + shift)});
  }
  return out;
}

}  // namespace hcolor
