#include "hcolor/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hcolor {

namespace {

int argmax(std::span<const double> dist) {
  return static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

int sample_bin(std::span<const double> dist, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  int last = 0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] <= 0.0) continue;
    cum += dist[k];
    last = static_cast<int>(k);
    if (u < cum) return last;
  }
  return last;
}

double median(std::span<const double> dist, const BinTable& table) {
  double cum = 0.0;
  int last = 0;
  for (int k = 0; k < table.size(); ++k) {
    const double w = dist[k];
    if (w <= 0.0) continue;
    last = k;
    if (cum + w >= 0.5) {
      double lo = table.lower_edge(k);
      double hi = table.upper_edge(k);
      if (!std::isfinite(lo)) lo = table.centroids[k];
      if (!std::isfinite(hi)) hi = table.centroids[k];
      const double frac = std::clamp((0.5 - cum) / w, 0.0, 1.0);
      return lo + frac * (hi - lo);
    }
    cum += w;
  }
  return table.centroids[last];
}

double lab_lightness(double gray) { return rgb_to_lab({gray, gray, gray}).L_star; }

}  // namespace

std::string to_string(DecodeMethod m) {
  switch (m) {
    case DecodeMethod::sample: return "sample";
    case DecodeMethod::mode: return "mode";
    case DecodeMethod::median: return "median";
    case DecodeMethod::expectation: return "expectation";
  }
  return "?";
}

DecodeMethod decode_method_from_string(const std::string& name) {
  for (DecodeMethod m : {DecodeMethod::sample, DecodeMethod::mode, DecodeMethod::median, DecodeMethod::expectation})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown decode method '" + name + "'");
}

double decode_scalar_channel(std::span<const double> dist, const BinTable& table, DecodeMethod method, Rng* rng) {
  if (static_cast<int>(dist.size()) != table.size()) throw std::invalid_argument("decode: distribution/table size mismatch");
  switch (method) {
    case DecodeMethod::sample: {
      if (!rng) throw std::invalid_argument("decode: sample method needs a generator");
      return table.centroids[sample_bin(dist, *rng)];
    }
    case DecodeMethod::mode:
      return table.centroids[argmax(dist)];
    case DecodeMethod::median:
      if (table.circular) throw std::invalid_argument("decode: median is undefined for circular channels");
      return median(dist, table);
    case DecodeMethod::expectation: {
      if (table.circular) return circular_hue_expectation(dist).hue;
      double acc = 0.0;
      for (int k = 0; k < table.size(); ++k) acc += dist[k] * table.centroids[k];
      return acc;
    }
  }
  return 0.0;
}

HueEstimate circular_hue_expectation(std::span<const double> dist) {
  const double k_bins = static_cast<double>(dist.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / k_bins;
    re += dist[k] * std::cos(theta);
    im += dist[k] * std::sin(theta);
  }
  re /= k_bins;
  im /= k_bins;
  HueEstimate est;
  est.magnitude = std::hypot(re, im);
  if (est.magnitude < 1e-12) return {0.0, est.magnitude};
  double hue = std::atan2(im, re) / (2.0 * std::numbers::pi);
  if (hue < 0.0) hue += 1.0;
  if (hue >= 1.0) hue = 0.0;
  est.hue = hue;
  return est;
}

double chromatic_fade(double chroma, double magnitude, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("chromatic_fade: eta must be positive");
  return chroma * std::min(magnitude / eta, 1.0);
}

std::pair<double, double> decode_joint(std::span<const double> dist, const JointBinTable& table, DecodeMethod method,
                                       Rng* rng) {
  if (static_cast<int>(dist.size()) != table.size()) throw std::invalid_argument("decode: joint size mismatch");
  switch (method) {
    case DecodeMethod::sample:
      if (!rng) throw std::invalid_argument("decode: sample method needs a generator");
      return table.centroid(sample_bin(dist, *rng));
    case DecodeMethod::mode:
      return table.centroid(argmax(dist));
    case DecodeMethod::expectation: {
      double a = 0.0, b = 0.0;
      for (int k = 0; k < table.size(); ++k) {
        const auto [ca, cb] = table.centroid(k);
        a += dist[k] * ca;
        b += dist[k] * cb;
      }
      return {a, b};
    }
    case DecodeMethod::median: {
      // Median of each marginal.
      const int kb = table.b.size();
      std::vector<double> pa(table.a.size(), 0.0), pb(kb, 0.0);
      for (int k = 0; k < table.size(); ++k) {
        pa[k / kb] += dist[k];
        pb[k % kb] += dist[k];
      }
      return {median(pa, table.a), median(pb, table.b)};
    }
  }
  return {0.0, 0.0};
}

std::vector<double> decode_chroma(const HistogramField& field, const DecodePolicy& policy) {
  const FieldChannel& ch = field.channel("chroma");
  const BinTable table = build_bins(ch.spec);
  std::vector<double> out(field.pixel_count());
  for (std::size_t n = 0; n < field.pixel_count(); ++n) {
    Rng rng(mix_seed(policy.seed, n, 1));
    out[n] = decode_scalar_channel(field.dist(ch, n), table, policy.chroma, &rng);
  }
  return out;
}

RgbImage render(const HistogramField& field, const GrayImage& gray, const DecodePolicy& policy) {
  if (field.width() != gray.width() || field.height() != gray.height())
    throw std::invalid_argument("render: field and grayscale dimensions differ");
  if (policy.chromatic_fading && !(policy.eta > 0.0)) throw std::invalid_argument("render: eta must be positive");
  RgbImage out(gray.width(), gray.height());

  if (field.has_channel("hue") && field.has_channel("chroma")) {
    const FieldChannel& hue_ch = field.channel("hue");
    const BinTable hue_table = build_bins(hue_ch.spec);
    if (!hue_table.circular || hue_table.size() != hue_ch.bins) throw std::invalid_argument("render: bad hue table");
    if (policy.hue == DecodeMethod::median) throw std::invalid_argument("render: median is undefined for hue");
    const std::vector<double> chroma = decode_chroma(field, policy);
    for (std::size_t n = 0; n < field.pixel_count(); ++n) {
      const auto dist = field.dist(hue_ch, n);
      const HueEstimate z = circular_hue_expectation(dist);
      double hue = z.hue;
      if (policy.hue != DecodeMethod::expectation) {
        Rng rng(mix_seed(policy.seed, n, 0));
        hue = decode_scalar_channel(dist, hue_table, policy.hue, &rng);
      }
      double c = chroma[n];
      if (policy.chromatic_fading) c = chromatic_fade(c, z.magnitude, policy.eta);
      out.set_pixel(n, huechroma_to_rgb({hue, c, gray[n]}));
    }
  } else if (field.has_channel("a") && field.has_channel("b")) {
    const FieldChannel& a_ch = field.channel("a");
    const FieldChannel& b_ch = field.channel("b");
    const BinTable a_table = build_bins(a_ch.spec);
    const BinTable b_table = build_bins(b_ch.spec);
    for (std::size_t n = 0; n < field.pixel_count(); ++n) {
      Rng rng(mix_seed(policy.seed, n, 2));
      const double a = decode_scalar_channel(field.dist(a_ch, n), a_table, policy.chroma, &rng);
      const double b = decode_scalar_channel(field.dist(b_ch, n), b_table, policy.chroma, &rng);
      out.set_pixel(n, lab_to_rgb({lab_lightness(gray[n]), a, b}));
    }
  } else if (field.has_channel("ab")) {
    const FieldChannel& ch = field.channel("ab");
    const JointBinTable table = build_joint_bins(ch.spec);
    if (table.size() != ch.bins) throw std::invalid_argument("render: joint table does not match field");
    for (std::size_t n = 0; n < field.pixel_count(); ++n) {
      Rng rng(mix_seed(policy.seed, n, 2));
      const auto [a, b] = decode_joint(field.dist(ch, n), table, policy.chroma, &rng);
      out.set_pixel(n, lab_to_rgb({lab_lightness(gray[n]), a, b}));
    }
  } else {
    throw std::invalid_argument("render: field has neither hue/chroma nor Lab channels");
  }
  return lightness_correct(out, gray);
}

RgbImage render_ab(std::span<const std::pair<double, double>> ab, const GrayImage& gray) {
  if (ab.size() != gray.pixel_count()) throw std::invalid_argument("render_ab: size mismatch");
  RgbImage out(gray.width(), gray.height());
  for (std::size_t n = 0; n < ab.size(); ++n) out.set_pixel(n, lab_to_rgb({lab_lightness(gray[n]), ab[n].first, ab[n].second}));
  return lightness_correct(out, gray);
}

}  // namespace hcolor
