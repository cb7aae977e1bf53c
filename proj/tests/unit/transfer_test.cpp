#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hcolor/decode.hpp"
#include "hcolor/transfer.hpp"
#include "test_util.hpp"

namespace hcolor {
namespace {

std::vector<double> random_dist(Rng& rng, int k, double sharpness = 1.0) {
  std::vector<double> p(k);
  double s = 0;
  for (double& v : p) s += v = std::pow(rng.uniform() + 1e-3, sharpness);
  for (double& v : p) v /= s;
  return p;
}

HistogramField random_field(int w, int h, std::uint64_t seed, int hue_bins = 32, int chroma_bins = 32) {
  Rng rng(seed);
  HistogramField f(w, h);
  FieldChannel& hue = f.add_channel("hue", BinSpec::circular(hue_bins), hue_bins);
  FieldChannel& chroma = f.add_channel("chroma", BinSpec::uniform(chroma_bins), chroma_bins);
  for (std::size_t n = 0; n < f.pixel_count(); ++n) {
    const auto ph = random_dist(rng, hue_bins, 3.0);
    const auto pc = random_dist(rng, chroma_bins, 3.0);
    std::copy(ph.begin(), ph.end(), hue.probs.begin() + n * hue_bins);
    std::copy(pc.begin(), pc.end(), chroma.probs.begin() + n * chroma_bins);
  }
  return f;
}

double circ_dist(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

TEST(SymmetricChi2, Examples) {
  const double p[] = {0.5, 0.5}, q[] = {0.25, 0.75};
  EXPECT_EQ(symmetric_chi2(p, p), 0.0);
  const double a[] = {1, 0}, b[] = {0, 1};
  EXPECT_DOUBLE_EQ(symmetric_chi2(a, b), 2.0);
  EXPECT_NEAR(symmetric_chi2(p, q), 0.0625 / 0.75 + 0.0625 / 1.25, 1e-15);
  EXPECT_NEAR(symmetric_chi2(p, q), 0.133333, 1e-6);
  const double z[] = {0, 0};
  EXPECT_EQ(symmetric_chi2(z, z), 0.0);
}

TEST(SymmetricChi2, SymmetricAndBounded) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_dist(rng, 7, 4.0), q = random_dist(rng, 7, 4.0);
    ASSERT_EQ(symmetric_chi2(p, q), symmetric_chi2(q, p));
    ASSERT_LE(symmetric_chi2(p, q), 2.0);
    ASSERT_GE(symmetric_chi2(p, q), 0.0);
  }
}

TEST(QuantileMap, SelfIsIdentityAndMonotone) {
  const double v[] = {0.3, 0.1, 0.1, 0.7, 0.5};
  const auto same = quantile_map(v, v);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(same[i], v[i]);
  const double ref[] = {10, 20, 30};
  const auto m = quantile_map(v, ref);
  EXPECT_EQ(m[1], m[2]);  // ties share a value
  EXPECT_LT(m[1], m[0]);
  EXPECT_LT(m[0], m[4]);
  EXPECT_LT(m[4], m[3]);
  EXPECT_EQ(m[3], 30.0);
}

TEST(QuantileMatch, IdentityOnSelf) {
  for (const RgbImage& img : testing::real_images()) {
    EXPECT_LT(testing::max_abs_diff(quantile_match(img, img), img), 1e-6);
  }
  const RgbImage r = testing::random_image(17, 13, 4);
  EXPECT_LT(testing::max_abs_diff(quantile_match(r, r), r), 1e-6);
}

TEST(QuantileMatch, ConstantColors) {
  RgbImage src(4, 4), tgt(3, 5);
  for (std::size_t i = 0; i < src.pixel_count(); ++i) src.set_pixel(i, {0.2, 0.4, 0.6});
  for (std::size_t i = 0; i < tgt.pixel_count(); ++i) tgt.set_pixel(i, {0.6, 0.3, 0.3});
  const RgbImage out = quantile_match(src, tgt);
  // Target normalized color (1.5, 0.75, 0.75) times source lightness 0.4.
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    const Rgb c = out.pixel(i);
    EXPECT_NEAR(c.r, 0.6, 1e-12);
    EXPECT_NEAR(c.g, 0.3, 1e-12);
    EXPECT_NEAR(c.b, 0.3, 1e-12);
  }
}

TEST(QuantileMatch, Idempotent) {
  const auto imgs = testing::real_images();
  for (std::size_t i = 0; i + 1 < imgs.size(); i += 2) {
    const RgbImage once = quantile_match(imgs[i], imgs[i + 1]);
    const RgbImage twice = quantile_match(once, imgs[i + 1]);
    EXPECT_LT(testing::max_abs_diff(once, twice), 1e-6) << i;
  }
}

// Deciles of each lightness-normalized output channel against the target's.
// The joint renormalization that makes matching idempotent moves them off the
// exact per-channel quantiles, so agreement is approximate.
TEST(QuantileMatch, DecilesApproachTarget) {
  const auto imgs = testing::real_images();
  auto deciles = [](const RgbImage& img, int c) {
    std::vector<double> v;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      const Rgb px = img.pixel(i);
      const double l = lightness(px);
      if (l < 0.05) continue;
      v.push_back((c == 0 ? px.r : c == 1 ? px.g : px.b) / l);
    }
    std::sort(v.begin(), v.end());
    std::vector<double> d;
    for (int q = 1; q < 10; ++q) d.push_back(v[v.size() * q / 10]);
    return d;
  };
  double total = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < imgs.size(); i += 2) {
    double before = 0.0, after = 0.0;
    const RgbImage out = quantile_match(imgs[i], imgs[i + 1]);
    for (int c = 0; c < 3; ++c) {
      const auto dt = deciles(imgs[i + 1], c), ds = deciles(imgs[i], c), dout = deciles(out, c);
      for (int q = 0; q < 9; ++q) {
        before += std::abs(ds[q] - dt[q]);
        after += std::abs(dout[q] - dt[q]);
        ++count;
      }
    }
    EXPECT_LT(after, 0.5 * before) << i;
    total += after;
  }
  EXPECT_LT(total / count, 0.05);
}

TEST(QuantileMatch, EmptyThrows) {
  EXPECT_THROW(quantile_match(RgbImage(), testing::random_image(2, 2, 1)), std::invalid_argument);
}

TEST(TransferEnergy, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(7));
    const int n = 1 + static_cast<int>(rng.below(10));
    std::vector<double> probs;
    for (int i = 0; i < n; ++i) {
      const auto p = random_dist(rng, k, 2.0);
      probs.insert(probs.end(), p.begin(), p.end());
    }
    const auto t = random_dist(rng, k, 2.0);
    std::vector<double> b(k);
    for (double& v : b) v = rng.uniform(-1, 1);
    const double lambda = rng.uniform(0, 3);
    std::vector<double> grad;
    transfer_energy(probs, k, t, b, lambda, &grad);
    for (int j = 0; j < k; ++j) {
      const double h = 1e-6;
      auto up = b, down = b;
      up[j] += h;
      down[j] -= h;
      const double fd = (transfer_energy(probs, k, t, up, lambda) - transfer_energy(probs, k, t, down, lambda)) / (2 * h);
      ASSERT_LT(std::abs(fd - grad[j]) / std::max({std::abs(fd), std::abs(grad[j]), 1e-7}), 1e-4);
    }
  }
}

TEST(EnergyMinimize, LambdaZeroKeepsPredictions) {
  const HistogramField f = random_field(5, 4, 2);
  TransferConfig cfg;
  cfg.lambda = 0.0;
  const TargetHistogramSet t = {std::vector<double>(32, 1.0 / 32), std::vector<double>(32, 1.0 / 32)};
  const TransferResult r = energy_minimize(f, t, cfg);
  for (const auto& b : r.bias)
    for (double v : b) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(r.energy, 0.0, 1e-12);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < f.channels()[c].probs.size(); ++i)
      ASSERT_NEAR(r.posterior.channels()[c].probs[i], f.channels()[c].probs[i], 1e-12);
}

TEST(EnergyMinimize, TargetEqualToMeanIsStationary) {
  const HistogramField f = random_field(6, 3, 3);
  TargetHistogramSet t;
  for (const auto& ch : f.channels()) {
    std::vector<double> mean(ch.bins, 0.0);
    for (std::size_t n = 0; n < f.pixel_count(); ++n)
      for (int k = 0; k < ch.bins; ++k) mean[k] += ch.probs[n * ch.bins + k] / f.pixel_count();
    t.push_back(mean);
  }
  const TransferConfig cfg;
  const TransferResult r = energy_minimize(f, t, cfg);
  for (const auto& ch : r.channels) {
    EXPECT_LT(ch.grad_norm, cfg.tol);
    for (double v : ch.bias) EXPECT_EQ(v, 0.0);
  }
}

TEST(EnergyMinimize, MatchesGridOracle) {
  // N = 3 pixels, K = 2, lambda = 1: brute force over b in [-5,5]^2, step 0.01.
  Rng rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    HistogramField f(3, 1);
    FieldChannel& ch = f.add_channel("x", BinSpec::uniform(2), 2);
    for (std::size_t n = 0; n < 3; ++n) {
      const double p = rng.uniform(0.05, 0.95);
      ch.probs[2 * n] = p;
      ch.probs[2 * n + 1] = 1 - p;
    }
    const double t0 = rng.uniform(0.05, 0.95);
    const std::vector<double> t{t0, 1 - t0};

    // Oracle energy written from the definition.
    auto energy = [&](double b0, double b1) {
      double unary = 0.0, m0 = 0.0;
      for (std::size_t n = 0; n < 3; ++n) {
        const double p0 = ch.probs[2 * n], p1 = ch.probs[2 * n + 1];
        const double w0 = p0 * std::exp(b0), w1 = p1 * std::exp(b1);
        const double q0 = w0 / (w0 + w1), q1 = 1 - q0;
        unary += q0 * std::log(q0 / p0) + q1 * std::log(q1 / p1);
        m0 += q0 / 3;
      }
      const double m1 = 1 - m0;
      return unary / 3 + (m0 - t[0]) * (m0 - t[0]) / (m0 + t[0]) + (m1 - t[1]) * (m1 - t[1]) / (m1 + t[1]);
    };
    double best = INFINITY;
    for (int i = 0; i <= 1000; ++i)
      for (int j = 0; j <= 1000; ++j) best = std::min(best, energy(-5 + 0.01 * i, -5 + 0.01 * j));

    TransferConfig cfg;
    cfg.lambda = 1.0;
    const TransferResult r = energy_minimize(f, {t}, cfg);
    EXPECT_NEAR(r.energy, best, 1e-3);
    EXPECT_NEAR(r.energy, energy(r.bias[0][0], r.bias[0][1]), 1e-9);
    EXPECT_LE(r.energy, best + 1e-9);
  }
}

TEST(EnergyMinimize, TraceNonincreasingAndPosteriorValid) {
  const HistogramField f = random_field(8, 8, 4);
  Rng rng(9);
  const TargetHistogramSet t = {random_dist(rng, 32, 3.0), random_dist(rng, 32, 3.0)};
  for (double lr : {0.1, 1.0, 50.0}) {
    TransferConfig cfg;
    cfg.lr = lr;
    cfg.lambda = 2.0;
    const TransferResult r = energy_minimize(f, t, cfg);
    for (const auto& ch : r.channels) {
      for (std::size_t i = 1; i < ch.energy_trace.size(); ++i) ASSERT_LE(ch.energy_trace[i], ch.energy_trace[i - 1]);
      EXPECT_LE(ch.energy, ch.initial_energy);
      EXPECT_LT(ch.energy, ch.initial_energy);
    }
    EXPECT_TRUE(r.posterior.is_valid(1e-6));
  }
}

TEST(EnergyMinimize, Errors) {
  const HistogramField f = random_field(2, 2, 1);
  EXPECT_THROW(energy_minimize(f, {std::vector<double>(32, 1.0 / 32)}, {}), std::invalid_argument);
  TransferConfig bad;
  bad.lambda = -1;
  EXPECT_THROW(energy_minimize(f, {std::vector<double>(32, 1.0 / 32), std::vector<double>(32, 1.0 / 32)}, bad),
               std::invalid_argument);
}

TEST(ApplyBias, ConstantShiftInvariant) {
  const HistogramField f = random_field(4, 4, 6);
  Rng rng(3);
  BiasVector b(2, std::vector<double>(32));
  for (auto& v : b)
    for (double& x : v) x = rng.uniform(-2, 2);
  BiasVector shifted = b;
  for (auto& v : shifted)
    for (double& x : v) x += 3.7;
  const HistogramField a = apply_bias(f, b), s = apply_bias(f, shifted);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < a.channels()[c].probs.size(); ++i)
      ASSERT_NEAR(a.channels()[c].probs[i], s.channels()[c].probs[i], 1e-12);
}

TEST(BiasedSamples, ZeroBiasEqualsRender) {
  const HistogramField f = random_field(6, 5, 7);
  const GrayImage gray = testing::random_gray(6, 5, 1);
  const BiasVector zero(2, std::vector<double>(32, 0.0));
  const std::vector<BiasVector> biases{zero};
  const auto out = biased_samples(f, biases, gray, {});
  EXPECT_LT(testing::max_abs_diff(out[0], render(f, gray, {})), 1e-12);
}

TEST(BiasedSamples, OneHotFieldBarelyMoves) {
  const OutputCoding coding({LossVariant::hue_chroma_hist, 5.0, 1}, 32, 25.0);
  const RgbImage img = testing::real_images()[1];
  const HistogramField f = testing::onehot_field(img, coding);
  Rng rng(2);
  BiasVector b(2, std::vector<double>(32));
  for (auto& v : b)
    for (double& x : v) x = rng.uniform(-1, 1);
  const HistogramField moved = apply_bias(f, b);
  const BinTable chroma = build_bins(BinSpec::uniform(32));
  for (std::size_t n = 0; n < f.pixel_count(); ++n) {
    const auto h0 = circular_hue_expectation(f.dist(f.channels()[0], n));
    const auto h1 = circular_hue_expectation(moved.dist(moved.channels()[0], n));
    ASSERT_LT(circ_dist(h0.hue, h1.hue), 1.0 / 32);
    const double c0 = decode_scalar_channel(f.dist(f.channels()[1], n), chroma, DecodeMethod::median);
    const double c1 = decode_scalar_channel(moved.dist(moved.channels()[1], n), chroma, DecodeMethod::median);
    ASSERT_LT(std::abs(c0 - c1), 1.0 / 32);
  }
}

TEST(BiasedSamples, StrongBiasPullsHue) {
  const HistogramField f = random_field(10, 10, 11);
  const double goal = 2.0 / 3.0;
  BiasVector b(2, std::vector<double>(32, 0.0));
  const BinTable hue = build_bins(BinSpec::circular(32));
  for (int k = 0; k < 32; ++k) b[0][k] = 4.0 * std::cos(hue.angle(k) - 2 * std::numbers::pi * goal);
  const HistogramField moved = apply_bias(f, b);
  double before = 0, after = 0;
  for (std::size_t n = 0; n < f.pixel_count(); ++n) {
    before += circ_dist(circular_hue_expectation(f.dist(f.channels()[0], n)).hue, goal);
    after += circ_dist(circular_hue_expectation(moved.dist(moved.channels()[0], n)).hue, goal);
  }
  EXPECT_LT(after, 0.5 * before);
}

TEST(RotationBiases, DeterministicAndDistinct) {
  const HistogramField f = random_field(3, 3, 1);
  const auto a = rotation_biases(f, 4, 2.0, 0.1), b = rotation_biases(f, 4, 2.0, 0.1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a[0], a[1]);
  for (double v : a[0][1]) EXPECT_EQ(v, 0.0);  // chroma untouched
}

TEST(UncertaintyMap, Examples) {
  HistogramField f(3, 1);
  FieldChannel& hue = f.add_channel("hue", BinSpec::circular(8), 8);
  FieldChannel& chroma = f.add_channel("chroma", BinSpec::uniform(4), 4);
  hue.probs[0 * 8 + 2] = 1.0;  // one-hot hue
  for (int k = 0; k < 8; ++k) hue.probs[1 * 8 + k] = hue.probs[2 * 8 + k] = 1.0 / 8;
  chroma.probs[0 * 4 + 3] = 1.0;
  chroma.probs[1 * 4 + 2] = 1.0;  // median decode: centroid 0.625
  chroma.probs[2 * 4 + 0] = 1.0;
  DecodePolicy p;
  p.chroma = DecodeMethod::expectation;
  const GrayImage u = uncertainty_map(f, p);
  EXPECT_EQ(u[0], 0.0);
  EXPECT_NEAR(u[1], 0.625, 1e-12);
  EXPECT_NEAR(u[2], 0.125, 1e-12);

  f.channel("chroma").spec = BinSpec::uniform(4, -1.0 / 6, 7.0 / 6);  // lowest centroid exactly 0
  EXPECT_NEAR(uncertainty_map(f, p)[2], 0.0, 1e-15);

  HistogramField no_hue(1, 1);
  no_hue.add_channel("chroma", BinSpec::uniform(4), 4).probs[0] = 1.0;
  EXPECT_THROW(uncertainty_map(no_hue, p), std::invalid_argument);
}

TEST(GroundTruthHistograms, NormalizedPerChannel) {
  const RgbImage img = testing::real_images()[2];
  const OutputCoding coding({LossVariant::hue_chroma_hist, 5.0, 1}, 32, 25.0);
  const HistogramField like = testing::onehot_field(img, coding);
  const auto t = ground_truth_histograms(img, like);
  ASSERT_EQ(t.size(), 2u);
  for (const auto& h : t) {
    double s = 0;
    for (double v : h) s += v;
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
  // Chroma histogram equals the pixel average of the one-hot field.
  for (int k = 0; k < 32; ++k) {
    double m = 0;
    for (std::size_t n = 0; n < like.pixel_count(); ++n) m += like.dist(like.channels()[1], n)[k];
    EXPECT_NEAR(t[1][k], m / like.pixel_count(), 1e-12);
  }
}

}  // namespace
}  // namespace hcolor
