#pragma once

#include <string>

#include "hcolor/errors.hpp"
#include "hcolor/field.hpp"

namespace hcolor {

/// "HFLD", u32 version, width, height, channel count; per channel its name,
/// bin kind, bins per axis, K and table parameters; then each channel's
/// distributions pixel-major (row-major pixels) as little-endian f32.
void save_field(const HistogramField& field, const std::string& path);
/// Throws FileFormatError on a malformed file or one whose distributions do
/// not sum to 1.
HistogramField load_field(const std::string& path);

}  // namespace hcolor
