#include "hcolor/coding.hpp"

#include <algorithm>
#include <stdexcept>

namespace hcolor {

OutputCoding::OutputCoding(LossConfig loss, int bins, double sigma) : loss_(loss), bins_(bins), sigma_(sigma) {
  if (!(loss.lambda_h > 0.0)) throw std::invalid_argument("lambda_h must be positive");
  if (loss.region < 1) throw std::invalid_argument("region size must be >= 1");
  switch (loss.variant) {
    case LossVariant::hue_chroma_hist: {
      const BinSpec hue = BinSpec::circular(bins);
      const BinSpec chroma = BinSpec::uniform(bins, 0.0, 1.0);
      tables_ = {build_bins(hue), build_bins(chroma)};
      heads_ = {{"hue", bins, true, hue}, {"chroma", bins, true, chroma}};
      break;
    }
    case LossVariant::lab_marginal_hist: {
      const BinSpec axis = BinSpec::gaussian(bins, sigma);
      tables_ = {build_bins(axis), build_bins(axis)};
      heads_ = {{"a", bins, true, axis}, {"b", bins, true, axis}};
      break;
    }
    case LossVariant::lab_joint_hist: {
      const BinSpec spec = BinSpec::joint(bins, sigma);
      joint_ = build_joint_bins(spec);
      heads_ = {{"ab", joint_->size(), true, spec}};
      break;
    }
    case LossVariant::lab_l2:
      heads_ = {{"ab", 2, false, std::nullopt}};
      break;
  }
}

PixelTargets OutputCoding::make_targets(const RgbImage& img) const {
  PixelTargets t{img.width(), img.height(), std::vector<double>(img.pixel_count()),
                 std::vector<double>(img.pixel_count())};
  const bool huechroma = loss_.variant == LossVariant::hue_chroma_hist;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    if (huechroma) {
      const HueChromaPixel hc = rgb_to_huechroma(img.pixel(i));
      t.first[i] = hc.hue;
      t.second[i] = hc.chroma;
    } else {
      const LabPixel lab = rgb_to_lab(img.pixel(i));
      t.first[i] = lab.a;
      t.second[i] = lab.b;
    }
  }
  return t;
}

std::vector<double> OutputCoding::region_values(const std::vector<double>& channel, const PixelTargets& t, int x,
                                                int y) const {
  const int r = loss_.region;
  if (r == 1) return {channel[static_cast<std::size_t>(y) * t.width + x]};
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(r) * r);
  const int lo = -(r - 1) / 2;
  for (int dy = lo; dy < lo + r; ++dy) {
    for (int dx = lo; dx < lo + r; ++dx) {
      const int xx = std::clamp(x + dx, 0, t.width - 1);
      const int yy = std::clamp(y + dy, 0, t.height - 1);
      values.push_back(channel[static_cast<std::size_t>(yy) * t.width + xx]);
    }
  }
  return values;
}

double OutputCoding::sample_loss(const PixelTargets& targets, int x, int y,
                                 const std::vector<std::vector<double>>& outputs,
                                 std::vector<std::vector<double>>& logit_grads) const {
  if (outputs.size() != heads_.size()) throw std::invalid_argument("sample_loss: head count mismatch");
  logit_grads.resize(outputs.size());
  const std::size_t center = static_cast<std::size_t>(y) * targets.width + x;

  switch (loss_.variant) {
    case LossVariant::hue_chroma_hist: {
      const auto hue_t = target_histogram(region_values(targets.first, targets, x, y), tables_[0]);
      const auto chroma_t = target_histogram(region_values(targets.second, targets, x, y), tables_[1]);
      const double y_c = targets.second[center];
      const double loss = huechroma_loss(outputs[0], outputs[1], hue_t, chroma_t, y_c, loss_);
      logit_grads[0] = kl_softmax_grad(hue_t, outputs[0]);
      for (double& g : logit_grads[0]) g *= loss_.lambda_h * y_c;
      logit_grads[1] = kl_softmax_grad(chroma_t, outputs[1]);
      return loss;
    }
    case LossVariant::lab_marginal_hist: {
      double loss = 0.0;
      for (std::size_t h = 0; h < 2; ++h) {
        const auto& channel = h == 0 ? targets.first : targets.second;
        const auto t = target_histogram(region_values(channel, targets, x, y), tables_[h]);
        loss += kl_hist_loss(t, outputs[h]);
        logit_grads[h] = kl_softmax_grad(t, outputs[h]);
      }
      return loss;
    }
    case LossVariant::lab_joint_hist: {
      const auto a = region_values(targets.first, targets, x, y);
      const auto b = region_values(targets.second, targets, x, y);
      std::vector<std::pair<double, double>> ab(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) ab[i] = {a[i], b[i]};
      const auto t = target_histogram(std::span<const std::pair<double, double>>(ab), *joint_);
      logit_grads[0] = kl_softmax_grad(t, outputs[0]);
      return kl_hist_loss(t, outputs[0]);
    }
    case LossVariant::lab_l2: {
      const std::pair<double, double> pred{outputs[0][0], outputs[0][1]};
      const std::pair<double, double> target{targets.first[center] * kLabRegressionScale,
                                             targets.second[center] * kLabRegressionScale};
      const auto [ga, gb] = l2_loss_grad(pred, target);
      logit_grads[0] = {ga, gb};
      return l2_loss(pred, target);
    }
  }
  return 0.0;
}

}  // namespace hcolor
