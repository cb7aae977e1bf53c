#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hcolor {

enum class BinKind { gaussian_quantile, uniform_linear, uniform_circular, joint_gaussian };

std::string to_string(BinKind kind);
BinKind bin_kind_from_string(const std::string& name);

struct BinSpec {
  BinKind kind = BinKind::uniform_linear;
  int bins = 32;  ///< per axis for the joint kind
  double sigma = 25.0;
  double mu = 0.0;
  double range_lo = 0.0;
  double range_hi = 1.0;

  static BinSpec gaussian(int bins, double sigma) { return {BinKind::gaussian_quantile, bins, sigma, 0.0, 0.0, 0.0}; }
  static BinSpec uniform(int bins, double lo = 0.0, double hi = 1.0) { return {BinKind::uniform_linear, bins, 0.0, 0.0, lo, hi}; }
  static BinSpec circular(int bins) { return {BinKind::uniform_circular, bins, 0.0, 0.0, 0.0, 1.0}; }
  static BinSpec joint(int bins_per_axis, double sigma) { return {BinKind::joint_gaussian, bins_per_axis, sigma, 0.0, 0.0, 0.0}; }

  bool operator==(const BinSpec&) const = default;
};

/// Binning of one color axis. Gaussian tables have unbounded outer bins.
struct BinTable {
  BinSpec spec;
  std::vector<double> edges;      ///< K-1 interior boundaries, strictly increasing
  std::vector<double> centroids;  ///< K representative values
  bool circular = false;

  int size() const { return static_cast<int>(centroids.size()); }
  /// Lower/upper edge of bin k; +-infinity for the outer Gaussian bins.
  double lower_edge(int k) const;
  double upper_edge(int k) const;
  /// Angular centroid 2*pi*(k+0.5)/K, circular tables only.
  double angle(int k) const;
};

/// Product of two Gaussian-quantile tables; flat bin index = ia * K_b + ib.
struct JointBinTable {
  BinTable a;
  BinTable b;

  int size() const { return a.size() * b.size(); }
  std::pair<double, double> centroid(int k) const {
    return {a.centroids[k / b.size()], b.centroids[k % b.size()]};
  }
};

/// Inverse of the standard normal CDF, p in (0,1).
double inverse_normal_cdf(double p);

/// Throws std::invalid_argument for invalid specs, or for the joint kind
/// (use build_joint_bins).
BinTable build_bins(const BinSpec& spec);
JointBinTable build_joint_bins(const BinSpec& spec);

/// Circular tables take the value mod 1. Throws on NaN.
int quantize(double value, const BinTable& table);
int quantize(double a, double b, const JointBinTable& table);

/// Normalized bin-count histogram of the values of an RxR region.
std::vector<double> target_histogram(std::span<const double> values, const BinTable& table);
std::vector<double> target_histogram(std::span<const std::pair<double, double>> values,
                                     const JointBinTable& table);

enum class LossVariant { lab_l2, lab_marginal_hist, lab_joint_hist, hue_chroma_hist };

std::string to_string(LossVariant v);
LossVariant loss_variant_from_string(const std::string& name);

struct LossConfig {
  LossVariant variant = LossVariant::hue_chroma_hist;
  double lambda_h = 5.0;
  int region = 1;

  bool operator==(const LossConfig&) const = default;
};

inline constexpr double kProbabilityFloor = 1e-12;

/// KL(target || pred). pred must sum to 1 within 1e-6 and is floored at
/// kProbabilityFloor before the log.
double kl_hist_loss(std::span<const double> target, std::span<const double> pred);

/// Gradient of KL(target || softmax(logits)) with respect to the logits.
std::vector<double> kl_softmax_grad(std::span<const double> target, std::span<const double> probs);

double huechroma_loss(std::span<const double> pred_h, std::span<const double> pred_c,
                      std::span<const double> target_h, std::span<const double> target_c,
                      double y_c, const LossConfig& cfg);

double l2_loss(std::pair<double, double> pred, std::pair<double, double> target);
std::pair<double, double> l2_loss_grad(std::pair<double, double> pred, std::pair<double, double> target);

std::vector<double> softmax(std::span<const double> logits);

}  // namespace hcolor
