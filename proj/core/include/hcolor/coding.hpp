#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcolor/colorspace.hpp"
#include "hcolor/histo.hpp"

namespace hcolor {

/// Regression head output is (a,b) scaled by this factor.
inline constexpr double kLabRegressionScale = 0.01;

struct HeadSpec {
  std::string name;
  int outputs = 0;
  bool softmax = true;
  std::optional<BinSpec> bins;  ///< set for histogram heads

  bool operator==(const HeadSpec&) const = default;
};

/// Per-pixel ground-truth color values for one image, in the representation
/// the loss variant trains on: (hue, chroma) or Lab (a, b).
struct PixelTargets {
  int width = 0;
  int height = 0;
  std::vector<double> first;
  std::vector<double> second;
};

/// Output representation: loss variant plus the bin tables of its heads.
class OutputCoding {
 public:
  OutputCoding(LossConfig loss, int bins, double sigma);

  const LossConfig& loss() const { return loss_; }
  int bins() const { return bins_; }
  double sigma() const { return sigma_; }
  const std::vector<HeadSpec>& heads() const { return heads_; }

  /// Marginal table of head i (hue/chroma or a/b).
  const BinTable& table(std::size_t head) const { return tables_.at(head); }
  const JointBinTable& joint() const { return *joint_; }

  PixelTargets make_targets(const RgbImage& img) const;

  /// Loss at pixel (x,y) given each head's output (probabilities for softmax
  /// heads, raw values for regression). Writes d loss / d head-logits.
  double sample_loss(const PixelTargets& targets, int x, int y,
                     const std::vector<std::vector<double>>& outputs,
                     std::vector<std::vector<double>>& logit_grads) const;

 private:
  std::vector<double> region_values(const std::vector<double>& channel, const PixelTargets& t, int x, int y) const;

  LossConfig loss_;
  int bins_;
  double sigma_;
  std::vector<HeadSpec> heads_;
  std::vector<BinTable> tables_;
  std::optional<JointBinTable> joint_;
};

}  // namespace hcolor
