#include "hcolor/field.hpp"

#include <cmath>
#include <stdexcept>

namespace hcolor {

FieldChannel& HistogramField::add_channel(std::string name, BinSpec spec, int bins) {
  if (has_channel(name)) throw std::invalid_argument("duplicate field channel '" + name + "'");
  channels_.push_back({std::move(name), spec, bins, std::vector<double>(pixel_count() * bins, 0.0)});
  return channels_.back();
}

bool HistogramField::has_channel(const std::string& name) const {
  for (const auto& ch : channels_)
    if (ch.name == name) return true;
  return false;
}

const FieldChannel& HistogramField::channel(const std::string& name) const {
  for (const auto& ch : channels_)
    if (ch.name == name) return ch;
  throw std::invalid_argument("field has no channel '" + name + "'");
}

FieldChannel& HistogramField::channel(const std::string& name) {
  return const_cast<FieldChannel&>(static_cast<const HistogramField&>(*this).channel(name));
}

bool HistogramField::is_valid(double tol) const {
  for (const auto& ch : channels_) {
    if (ch.probs.size() != pixel_count() * ch.bins) return false;
    for (std::size_t n = 0; n < pixel_count(); ++n) {
      double sum = 0.0;
      for (double p : dist(ch, n)) {
        if (!(p >= 0.0) || !std::isfinite(p)) return false;
        sum += p;
      }
      if (std::abs(sum - 1.0) > tol) return false;
    }
  }
  return true;
}

}  // namespace hcolor
