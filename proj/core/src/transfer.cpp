#include "hcolor/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace hcolor {

namespace {

constexpr double kLightnessGuard = 1e-4;
constexpr double kTieTolerance = 1e-9;

// Lightness-normalized color; near-black pixels map to neutral.
Rgb normalized(Rgb c) {
  const double l = lightness(c);
  if (l < kLightnessGuard) return {1.0, 1.0, 1.0};
  return {c.r / l, c.g / l, c.b / l};
}

std::vector<double> channel_of(const std::vector<Rgb>& px, int c) {
  std::vector<double> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) out[i] = c == 0 ? px[i].r : c == 1 ? px[i].g : px[i].b;
  return out;
}

std::vector<double> clamped_logs(std::span<const double> probs, int bins) {
  std::vector<double> logp(probs.size());
  const std::size_t n = probs.size() / bins;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = 0; k < bins; ++k) sum += std::max(probs[i * bins + k], kProbabilityFloor);
    for (int k = 0; k < bins; ++k) logp[i * bins + k] = std::log(std::max(probs[i * bins + k], kProbabilityFloor) / sum);
  }
  return logp;
}

void posterior_row(const double* logp, std::span<const double> bias, int bins, double* out) {
  double hi = -INFINITY;
  for (int k = 0; k < bins; ++k) hi = std::max(hi, logp[k] + bias[k]);
  double sum = 0.0;
  for (int k = 0; k < bins; ++k) {
    out[k] = std::exp(logp[k] + bias[k] - hi);
    sum += out[k];
  }
  for (int k = 0; k < bins; ++k) out[k] /= sum;
}

// Energy given precomputed clamped logs.
double energy_from_logs(const std::vector<double>& logp, int bins, std::span<const double> target,
                        std::span<const double> bias, double lambda, std::vector<double>* grad) {
  const std::size_t n = logp.size() / bins;
  std::vector<double> q(bins), mean_q(bins, 0.0);
  std::vector<std::vector<double>> rows;
  if (grad) rows.resize(n);
  double unary = 0.0;
  std::vector<double> unary_grad(bins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    posterior_row(&logp[i * bins], bias, bins, q.data());
    double qb = 0.0;
    double kl = 0.0;
    for (int k = 0; k < bins; ++k) {
      qb += q[k] * bias[k];
      if (q[k] > 0.0) kl += q[k] * (std::log(q[k]) - logp[i * bins + k]);
      mean_q[k] += q[k];
    }
    unary += kl;
    if (grad) {
      for (int k = 0; k < bins; ++k) unary_grad[k] += q[k] * (bias[k] - qb);
      rows[i] = q;
    }
  }
  for (int k = 0; k < bins; ++k) mean_q[k] /= static_cast<double>(n);
  const double energy = unary / static_cast<double>(n) + lambda * symmetric_chi2(mean_q, target);

  if (grad) {
    // d chi2 / d mean_q
    std::vector<double> g(bins, 0.0);
    for (int k = 0; k < bins; ++k) {
      const double s = mean_q[k] + target[k];
      if (s < 1e-12) continue;
      const double d = mean_q[k] - target[k];
      g[k] = d * (mean_q[k] + 3.0 * target[k]) / (s * s);
    }
    grad->assign(bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = rows[i];
      double qg = 0.0;
      for (int k = 0; k < bins; ++k) qg += row[k] * g[k];
      for (int k = 0; k < bins; ++k) (*grad)[k] += lambda * row[k] * (g[k] - qg);
    }
    for (int k = 0; k < bins; ++k) (*grad)[k] = ((*grad)[k] + unary_grad[k]) / static_cast<double>(n);
  }
  return energy;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double symmetric_chi2(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("symmetric_chi2: size mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double s = p[k] + q[k];
    if (s < 1e-12) continue;
    const double d = p[k] - q[k];
    acc += d * d / s;
  }
  return acc;
}

std::vector<double> quantile_map(std::span<const double> values, std::span<const double> reference) {
  if (values.empty() || reference.empty()) throw std::invalid_argument("quantile_map: empty input");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted_ref(reference.begin(), reference.end());
  std::sort(sorted_ref.begin(), sorted_ref.end());
  const double last_ref = static_cast<double>(sorted_ref.size() - 1);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    // Near-equal values are ties too: a lightness round trip perturbs equal
    // colors by an ulp, which must not split them across quantiles.
    const double first = values[order[i]];
    while (j + 1 < n && values[order[j + 1]] - first <= kTieTolerance * std::max(1.0, std::abs(first))) ++j;
    const double rank = 0.5 * static_cast<double>(i + j);
    const double p = n > 1 ? rank / static_cast<double>(n - 1) : 0.5;
    const double pos = p * last_ref;
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted_ref.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    const double v = frac == 0.0 ? sorted_ref[lo] : sorted_ref[lo] + frac * (sorted_ref[hi] - sorted_ref[lo]);
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = v;
    i = j + 1;
  }
  return out;
}

RgbImage quantile_match(const RgbImage& source, const RgbImage& target, int max_passes) {
  if (source.empty() || target.empty()) throw std::invalid_argument("quantile_match: empty image");
  // Near-black pixels carry no usable color: they are left out of both
  // distributions and copied through unchanged.
  std::vector<std::size_t> lit;
  std::vector<Rgb> src, ref;
  for (std::size_t i = 0; i < source.pixel_count(); ++i) {
    if (lightness(source.pixel(i)) < kLightnessGuard) continue;
    lit.push_back(i);
    src.push_back(normalized(source.pixel(i)));
  }
  for (std::size_t i = 0; i < target.pixel_count(); ++i)
    if (lightness(target.pixel(i)) >= kLightnessGuard) ref.push_back(normalized(target.pixel(i)));
  if (ref.empty()) ref.push_back({1.0, 1.0, 1.0});
  const std::vector<double> ref_channels[3] = {channel_of(ref, 0), channel_of(ref, 1), channel_of(ref, 2)};

  for (int pass = 0; pass < std::max(max_passes, 1) && !src.empty(); ++pass) {
    std::vector<double> matched[3];
    for (int c = 0; c < 3; ++c) matched[c] = quantile_map(channel_of(src, c), ref_channels[c]);
    double moved = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Rgb m{matched[0][i], matched[1][i], matched[2][i]};
      const double mean = lightness(m);
      const Rgb next = mean < 1e-12 ? Rgb{1.0, 1.0, 1.0} : Rgb{m.r / mean, m.g / mean, m.b / mean};
      moved = std::max({moved, std::abs(next.r - src[i].r), std::abs(next.g - src[i].g), std::abs(next.b - src[i].b)});
      src[i] = next;
    }
    if (moved < 1e-12) break;
  }

  RgbImage out = source;
  for (std::size_t j = 0; j < lit.size(); ++j) {
    const Rgb n = src[j];
    const double l = lightness(source.pixel(lit[j]));
    // Out-of-gamut pixels are darkened rather than clipped per channel so the
    // normalized color survives and a second match is a no-op.
    const double peak = std::max({n.r, n.g, n.b}) * l;
    const double scale = peak > 1.0 ? l / peak : l;
    out.set_pixel(lit[j], {std::min(n.r * scale, 1.0), std::min(n.g * scale, 1.0), std::min(n.b * scale, 1.0)});
  }
  return out;
}

double transfer_energy(std::span<const double> probs, int bins, std::span<const double> target,
                       std::span<const double> bias, double lambda, std::vector<double>* grad) {
  if (bins < 1 || probs.size() % bins != 0 || probs.empty())
    throw std::invalid_argument("transfer_energy: bad distribution block");
  if (static_cast<int>(target.size()) != bins || static_cast<int>(bias.size()) != bins)
    throw std::invalid_argument("transfer_energy: target/bias size mismatch");
  return energy_from_logs(clamped_logs(probs, bins), bins, target, bias, lambda, grad);
}

HistogramField apply_bias(const HistogramField& field, const BiasVector& bias) {
  if (!bias.empty() && bias.size() != field.channels().size())
    throw std::invalid_argument("apply_bias: one bias vector per channel required");
  HistogramField out = field;
  for (std::size_t c = 0; c < out.channels().size(); ++c) {
    if (bias.empty() || bias[c].empty()) continue;
    FieldChannel& ch = out.channels()[c];
    if (static_cast<int>(bias[c].size()) != ch.bins) throw std::invalid_argument("apply_bias: bias length mismatch");
    const std::vector<double> logp = clamped_logs(ch.probs, ch.bins);
    for (std::size_t n = 0; n < out.pixel_count(); ++n)
      posterior_row(&logp[n * ch.bins], bias[c], ch.bins, &ch.probs[n * ch.bins]);
  }
  return out;
}

TransferResult energy_minimize(const HistogramField& field, const TargetHistogramSet& targets,
                               const TransferConfig& cfg) {
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("energy_minimize: lambda must be >= 0");
  if (!(cfg.lr > 0.0)) throw std::invalid_argument("energy_minimize: lr must be positive");
  if (targets.size() != field.channels().size())
    throw std::invalid_argument("energy_minimize: one target histogram per field channel required");

  TransferResult result;
  for (std::size_t c = 0; c < field.channels().size(); ++c) {
    const FieldChannel& ch = field.channels()[c];
    if (static_cast<int>(targets[c].size()) != ch.bins)
      throw std::invalid_argument("energy_minimize: target for '" + ch.name + "' has wrong bin count");
    const std::vector<double> logp = clamped_logs(ch.probs, ch.bins);

    ChannelTransfer tr;
    tr.bias.assign(ch.bins, 0.0);
    std::vector<double> grad;
    double energy = energy_from_logs(logp, ch.bins, targets[c], tr.bias, cfg.lambda, &grad);
    if (!std::isfinite(energy)) throw std::runtime_error("energy_minimize: non-finite energy for '" + ch.name + "'");
    tr.initial_energy = energy;
    tr.energy_trace.push_back(energy);

    std::vector<double> trial(ch.bins), trial_grad;
    for (int it = 0; it < cfg.max_iters; ++it) {
      if (norm2(grad) < cfg.tol) break;
      double step = cfg.lr;
      bool accepted = false;
      for (int h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
        for (int k = 0; k < ch.bins; ++k) trial[k] = tr.bias[k] - step * grad[k];
        const double e = energy_from_logs(logp, ch.bins, targets[c], trial, cfg.lambda, &trial_grad);
        if (!std::isfinite(e)) throw std::runtime_error("energy_minimize: non-finite energy for '" + ch.name + "'");
        if (e <= energy) {
          tr.bias = trial;
          grad = trial_grad;
          accepted = e < energy;
          energy = e;
          break;
        }
      }
      ++tr.iterations;
      tr.energy_trace.push_back(energy);
      if (!accepted) break;
    }
    tr.energy = energy;
    tr.grad_norm = norm2(grad);
    result.energy += energy;
    result.bias.push_back(tr.bias);
    result.channels.push_back(std::move(tr));
  }
  result.posterior = apply_bias(field, result.bias);
  return result;
}

TargetHistogramSet ground_truth_histograms(const RgbImage& img, const HistogramField& like) {
  TargetHistogramSet out;
  const std::size_t n = img.pixel_count();
  if (n == 0) throw std::invalid_argument("ground_truth_histograms: empty image");
  std::vector<HueChromaPixel> hc(n);
  std::vector<LabPixel> lab(n);
  for (std::size_t i = 0; i < n; ++i) {
    hc[i] = rgb_to_huechroma(img.pixel(i));
    lab[i] = rgb_to_lab(img.pixel(i));
  }
  for (const auto& ch : like.channels()) {
    std::vector<double> hist(ch.bins, 0.0);
    if (ch.spec.kind == BinKind::joint_gaussian) {
      const JointBinTable table = build_joint_bins(ch.spec);
      for (std::size_t i = 0; i < n; ++i) hist[quantize(lab[i].a, lab[i].b, table)] += 1.0;
    } else {
      const BinTable table = build_bins(ch.spec);
      if (ch.name == "hue") {
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          hist[quantize(hc[i].hue, table)] += hc[i].chroma;
          mass += hc[i].chroma;
        }
        if (mass <= 0.0)
          for (std::size_t i = 0; i < n; ++i) hist[quantize(hc[i].hue, table)] += 1.0;
      } else if (ch.name == "chroma") {
        for (std::size_t i = 0; i < n; ++i) hist[quantize(hc[i].chroma, table)] += 1.0;
      } else if (ch.name == "a" || ch.name == "b") {
        for (std::size_t i = 0; i < n; ++i) hist[quantize(ch.name == "a" ? lab[i].a : lab[i].b, table)] += 1.0;
      } else {
        throw std::invalid_argument("ground_truth_histograms: unknown channel '" + ch.name + "'");
      }
    }
    const double total = std::accumulate(hist.begin(), hist.end(), 0.0);
    for (double& h : hist) h /= total;
    out.push_back(std::move(hist));
  }
  return out;
}

std::vector<RgbImage> biased_samples(const HistogramField& field, std::span<const BiasVector> biases,
                                     const GrayImage& gray, const DecodePolicy& policy) {
  std::vector<RgbImage> out;
  for (std::size_t i = 0; i < biases.size(); ++i) {
    DecodePolicy p = policy;
    p.seed = mix_seed(policy.seed, 0xb1a5, i);
    out.push_back(render(apply_bias(field, biases[i]), gray, p));
  }
  return out;
}

GrayImage uncertainty_map(const HistogramField& field, const DecodePolicy& policy) {
  const FieldChannel& hue = field.channel("hue");
  (void)field.channel("chroma");
  const std::vector<double> chroma = decode_chroma(field, policy);
  const double log_k = std::log(static_cast<double>(hue.bins));
  GrayImage out(field.width(), field.height());
  for (std::size_t n = 0; n < field.pixel_count(); ++n) {
    double entropy = 0.0;
    for (double p : field.dist(hue, n))
      if (p > 0.0) entropy -= p * std::log(p);
    out[n] = std::clamp(entropy / log_k, 0.0, 1.0) * chroma[n];
  }
  return out;
}

std::vector<BiasVector> rotation_biases(const HistogramField& field, int count, double strength, double phase) {
  std::vector<BiasVector> out;
  for (int i = 0; i < count; ++i) {
    const double angle = 2.0 * std::numbers::pi * (phase + static_cast<double>(i) / count);
    BiasVector bias;
    for (const auto& ch : field.channels()) {
      std::vector<double> b(ch.bins, 0.0);
      if (ch.name == "hue") {
        const BinTable table = build_bins(ch.spec);
        for (int k = 0; k < ch.bins; ++k) b[k] = strength * std::cos(table.angle(k) - angle);
      } else if (ch.spec.kind == BinKind::joint_gaussian) {
        const JointBinTable table = build_joint_bins(ch.spec);
        for (int k = 0; k < ch.bins; ++k) {
          const auto [ca, cb] = table.centroid(k);
          b[k] = strength * (std::cos(angle) * ca + std::sin(angle) * cb) / ch.spec.sigma;
        }
      } else if (ch.name == "a" || ch.name == "b") {
        const BinTable table = build_bins(ch.spec);
        const double dir = ch.name == "a" ? std::cos(angle) : std::sin(angle);
        for (int k = 0; k < ch.bins; ++k) b[k] = strength * dir * table.centroids[k] / ch.spec.sigma;
      }
      bias.push_back(std::move(b));
    }
    out.push_back(std::move(bias));
  }
  return out;
}

}  // namespace hcolor
