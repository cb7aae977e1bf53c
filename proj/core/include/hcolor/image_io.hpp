#pragma once

#include <string>
#include <variant>

#include "hcolor/colorspace.hpp"
#include "hcolor/errors.hpp"

namespace hcolor {

/// Unreadable, malformed or unsupported image file.
class ImageIoError : public FileFormatError {
 public:
  using FileFormatError::FileFormatError;
};

/// 8-bit PNG (RGB/gray, palette and alpha are converted) or binary PPM (P6)
/// / PGM (P5), chosen by content. Values are mapped v/255.
std::variant<RgbImage, GrayImage> load_image(const std::string& path);
/// Gray files are replicated to three channels.
RgbImage load_rgb(const std::string& path);
/// Color files are desaturated.
GrayImage load_gray(const std::string& path);

/// Format by extension: .png, .ppm (RGB) or .pgm (gray, RGB input is
/// desaturated). Values are stored as round(v*255) clamped to [0,255].
void save_image(const RgbImage& img, const std::string& path);
void save_image(const GrayImage& img, const std::string& path);

}  // namespace hcolor
