#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hcolor/coding.hpp"
#include "hcolor/histo.hpp"
#include "hcolor/net.hpp"

namespace hcolor {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to build, train and decode a model.
struct PipelineConfig {
  LossConfig loss;
  int bins = 32;
  double sigma = 25.0;
  NetConfig net;  ///< heads are derived from loss/bins/sigma
  TrainOptions train;

  OutputCoding coding() const { return OutputCoding(loss, bins, sigma); }
  bool operator==(const PipelineConfig&) const = default;
};

/// Desk-scale defaults for a loss variant.
PipelineConfig default_config(LossVariant variant = LossVariant::hue_chroma_hist);

/// Parses flat `key = value` lines ('#' starts a comment). Keys absent from
/// the text keep their defaults; unknown keys are errors. Layer specs are
/// tuples `(in,out,kernel,stride,downsample)` separated by commas.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);

/// Inverse of parse_config: parse_config(format_config(c)) == c.
std::string format_config(const PipelineConfig& cfg);

}  // namespace hcolor
