#include "hcolor/histo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hcolor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_normalized(std::span<const double> p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative or NaN probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument(std::string(what) + ": distribution not normalized");
}

}  // namespace

std::string to_string(BinKind kind) {
  switch (kind) {
    case BinKind::gaussian_quantile: return "gaussian_quantile";
    case BinKind::uniform_linear: return "uniform_linear";
    case BinKind::uniform_circular: return "uniform_circular";
    case BinKind::joint_gaussian: return "joint_gaussian";
  }
  return "?";
}

BinKind bin_kind_from_string(const std::string& name) {
  for (BinKind k : {BinKind::gaussian_quantile, BinKind::uniform_linear, BinKind::uniform_circular,
                    BinKind::joint_gaussian})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown bin kind '" + name + "'");
}

std::string to_string(LossVariant v) {
  switch (v) {
    case LossVariant::lab_l2: return "lab_l2";
    case LossVariant::lab_marginal_hist: return "lab_marginal_hist";
    case LossVariant::lab_joint_hist: return "lab_joint_hist";
    case LossVariant::hue_chroma_hist: return "hue_chroma_hist";
  }
  return "?";
}

LossVariant loss_variant_from_string(const std::string& name) {
  for (LossVariant v : {LossVariant::lab_l2, LossVariant::lab_marginal_hist, LossVariant::lab_joint_hist,
                        LossVariant::hue_chroma_hist})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown loss variant '" + name + "'");
}

double BinTable::lower_edge(int k) const {
  if (k == 0) return spec.kind == BinKind::gaussian_quantile ? -kInf : spec.range_lo;
  return edges[k - 1];
}

double BinTable::upper_edge(int k) const {
  if (k == size() - 1) return spec.kind == BinKind::gaussian_quantile ? kInf : spec.range_hi;
  return edges[k];
}

double BinTable::angle(int k) const {
  return 2.0 * std::numbers::pi * (k + 0.5) / size();
}

// Acklam's rational approximation followed by one Halley step against erfc,
// which brings the relative error to machine precision.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p outside (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

BinTable build_bins(const BinSpec& spec) {
  if (spec.bins < 2) throw std::invalid_argument("build_bins: need at least 2 bins");
  const int k_bins = spec.bins;
  BinTable table;
  table.spec = spec;
  table.edges.resize(k_bins - 1);
  table.centroids.resize(k_bins);

  switch (spec.kind) {
    case BinKind::gaussian_quantile: {
      if (!(spec.sigma > 0.0)) throw std::invalid_argument("build_bins: sigma must be positive");
      for (int j = 1; j < k_bins; ++j)
        table.edges[j - 1] = spec.mu + spec.sigma * inverse_normal_cdf(static_cast<double>(j) / k_bins);
      for (int k = 0; k < k_bins; ++k)
        table.centroids[k] = spec.mu + spec.sigma * inverse_normal_cdf((k + 0.5) / k_bins);
      // Enforce exact antisymmetry about mu.
      for (int j = 0; j < (k_bins - 1) / 2; ++j) {
        const double half = 0.5 * ((table.edges[k_bins - 2 - j] - spec.mu) - (table.edges[j] - spec.mu));
        table.edges[j] = spec.mu - half;
        table.edges[k_bins - 2 - j] = spec.mu + half;
      }
      if (k_bins % 2 == 0) table.edges[k_bins / 2 - 1] = spec.mu;
      for (int k = 0; k < k_bins / 2; ++k) {
        const double half = 0.5 * ((table.centroids[k_bins - 1 - k] - spec.mu) - (table.centroids[k] - spec.mu));
        table.centroids[k] = spec.mu - half;
        table.centroids[k_bins - 1 - k] = spec.mu + half;
      }
      break;
    }
    case BinKind::uniform_circular:
      if (spec.range_lo != 0.0 || spec.range_hi != 1.0)
        throw std::invalid_argument("build_bins: circular tables span [0,1)");
      table.circular = true;
      [[fallthrough]];
    case BinKind::uniform_linear: {
      if (!(spec.range_hi > spec.range_lo)) throw std::invalid_argument("build_bins: empty range");
      const double width = (spec.range_hi - spec.range_lo) / k_bins;
      for (int j = 1; j < k_bins; ++j) table.edges[j - 1] = spec.range_lo + j * width;
      for (int k = 0; k < k_bins; ++k) table.centroids[k] = spec.range_lo + (k + 0.5) * width;
      break;
    }
    case BinKind::joint_gaussian:
      throw std::invalid_argument("build_bins: joint tables are built with build_joint_bins");
  }
  return table;
}

JointBinTable build_joint_bins(const BinSpec& spec) {
  if (spec.kind != BinKind::joint_gaussian) throw std::invalid_argument("build_joint_bins: not a joint spec");
  BinSpec axis = spec;
  axis.kind = BinKind::gaussian_quantile;
  JointBinTable table{build_bins(axis), build_bins(axis)};
  table.a.spec = spec;
  table.b.spec = spec;
  table.a.spec.kind = table.b.spec.kind = BinKind::gaussian_quantile;
  return table;
}

int quantize(double value, const BinTable& table) {
  if (std::isnan(value)) throw std::invalid_argument("quantize: NaN value");
  if (table.circular) value -= std::floor(value);
  const auto it = std::upper_bound(table.edges.begin(), table.edges.end(), value);
  return static_cast<int>(it - table.edges.begin());
}

int quantize(double a, double b, const JointBinTable& table) {
  return quantize(a, table.a) * table.b.size() + quantize(b, table.b);
}

std::vector<double> target_histogram(std::span<const double> values, const BinTable& table) {
  if (values.empty()) throw std::invalid_argument("target_histogram: no values");
  std::vector<double> hist(table.size(), 0.0);
  for (double v : values) hist[quantize(v, table)] += 1.0;
  for (double& h : hist) h /= static_cast<double>(values.size());
  return hist;
}

std::vector<double> target_histogram(std::span<const std::pair<double, double>> values,
                                     const JointBinTable& table) {
  if (values.empty()) throw std::invalid_argument("target_histogram: no values");
  std::vector<double> hist(table.size(), 0.0);
  for (const auto& [a, b] : values) hist[quantize(a, b, table)] += 1.0;
  for (double& h : hist) h /= static_cast<double>(values.size());
  return hist;
}

double kl_hist_loss(std::span<const double> target, std::span<const double> pred) {
  if (target.size() != pred.size()) throw std::invalid_argument("kl_hist_loss: size mismatch");
  check_normalized(pred, "kl_hist_loss");
  double loss = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (target[k] <= 0.0) continue;
    loss += target[k] * (std::log(target[k]) - std::log(std::max(pred[k], kProbabilityFloor)));
  }
  return std::max(loss, 0.0);
}

std::vector<double> kl_softmax_grad(std::span<const double> target, std::span<const double> probs) {
  if (target.size() != probs.size()) throw std::invalid_argument("kl_softmax_grad: size mismatch");
  double mass = 0.0;
  for (double t : target) mass += t;
  std::vector<double> grad(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) grad[k] = mass * probs[k] - target[k];
  return grad;
}

double huechroma_loss(std::span<const double> pred_h, std::span<const double> pred_c,
                      std::span<const double> target_h, std::span<const double> target_c,
                      double y_c, const LossConfig& cfg) {
  if (!(cfg.lambda_h > 0.0)) throw std::invalid_argument("huechroma_loss: lambda_h must be positive");
  const double chroma_term = kl_hist_loss(target_c, pred_c);
  const double hue_term = kl_hist_loss(target_h, pred_h);
  return chroma_term + cfg.lambda_h * y_c * hue_term;
}

double l2_loss(std::pair<double, double> pred, std::pair<double, double> target) {
  const double da = pred.first - target.first;
  const double db = pred.second - target.second;
  return da * da + db * db;
}

std::pair<double, double> l2_loss_grad(std::pair<double, double> pred, std::pair<double, double> target) {
  return {2.0 * (pred.first - target.first), 2.0 * (pred.second - target.second)};
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double hi = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - hi);
    sum += out[k];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace hcolor
