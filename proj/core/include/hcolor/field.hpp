#pragma once

#include <span>
#include <string>
#include <vector>

#include "hcolor/histo.hpp"

namespace hcolor {

/// One named per-pixel distribution channel; probs is pixel-major
/// (probs[pixel * bins + k]).
struct FieldChannel {
  std::string name;
  BinSpec spec;
  int bins = 0;
  std::vector<double> probs;
};

/// Dense per-pixel color distributions, one channel per histogram head.
class HistogramField {
 public:
  HistogramField() = default;
  HistogramField(int width, int height) : width_(width), height_(height) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::vector<FieldChannel>& channels() { return channels_; }
  const std::vector<FieldChannel>& channels() const { return channels_; }

  FieldChannel& add_channel(std::string name, BinSpec spec, int bins);
  bool has_channel(const std::string& name) const;
  /// Throws std::invalid_argument naming the channel when absent.
  const FieldChannel& channel(const std::string& name) const;
  FieldChannel& channel(const std::string& name);

  std::span<const double> dist(const FieldChannel& ch, std::size_t pixel) const {
    return {ch.probs.data() + pixel * ch.bins, static_cast<std::size_t>(ch.bins)};
  }

  /// Every distribution nonnegative and summing to 1 within tol.
  bool is_valid(double tol = 1e-6) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<FieldChannel> channels_;
};

}  // namespace hcolor
