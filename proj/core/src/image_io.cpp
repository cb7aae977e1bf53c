#include "hcolor/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace hcolor {

namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError(path, "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError(path, "cannot open file for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageIoError(path, "write failed");
}

std::string extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// --- PNM ----------------------------------------------------------------------

struct PnmCursor {
  const std::vector<std::uint8_t>& bytes;
  const std::string& path;
  std::size_t pos = 2;

  void skip_space() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  }

  int number() {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw ImageIoError(path, "malformed PNM header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1 << 20) throw ImageIoError(path, "PNM header value too large");
    }
    return static_cast<int>(v);
  }
};

std::variant<RgbImage, GrayImage> load_pnm(const std::vector<std::uint8_t>& bytes, const std::string& path) {
  const bool color = bytes[1] == '6';
  PnmCursor cur{bytes, path};
  const int w = cur.number();
  const int h = cur.number();
  const int maxval = cur.number();
  if (w <= 0 || h <= 0) throw ImageIoError(path, "invalid PNM dimensions");
  if (maxval != 255) throw ImageIoError(path, "unsupported bit depth");
  if (cur.pos >= bytes.size() || !std::isspace(bytes[cur.pos])) throw ImageIoError(path, "malformed PNM header");
  ++cur.pos;
  const std::size_t channels = color ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() - cur.pos < need) throw ImageIoError(path, "truncated file");
  const std::uint8_t* data = bytes.data() + cur.pos;
  if (color) {
    RgbImage img(w, h);
    for (std::size_t i = 0; i < need; ++i) img.data()[i] = data[i] / 255.0;
    return img;
  }
  GrayImage img(w, h);
  for (std::size_t i = 0; i < need; ++i) img[i] = data[i] / 255.0;
  return img;
}

// --- PNG ----------------------------------------------------------------------

std::variant<RgbImage, GrayImage> load_png(const std::vector<std::uint8_t>& bytes, const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw ImageIoError(path, std::string("invalid PNG: ") + image.message);
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw ImageIoError(path, "unsupported bit depth");
  }
  const bool color = image.format & PNG_FORMAT_FLAG_COLOR;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError(path, msg.find("EOF") != std::string::npos || msg.find("end") != std::string::npos
                                 ? "truncated file"
                                 : "invalid PNG: " + msg);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  if (color) {
    RgbImage img(w, h);
    for (std::size_t i = 0; i < buffer.size(); ++i) img.data()[i] = buffer[i] / 255.0;
    return img;
  }
  GrayImage img(w, h);
  for (std::size_t i = 0; i < buffer.size(); ++i) img[i] = buffer[i] / 255.0;
  return img;
}

void save_png(const std::string& path, const std::vector<std::uint8_t>& pixels, int w, int h, bool color) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, pixels.data(), 0, nullptr))
    throw ImageIoError(path, std::string("PNG encoding failed: ") + image.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr))
    throw ImageIoError(path, std::string("PNG encoding failed: ") + image.message);
  out.resize(size);
  write_file(path, out);
}

void save_pnm(const std::string& path, const std::vector<std::uint8_t>& pixels, int w, int h, bool color) {
  const std::string header = std::string(color ? "P6" : "P5") + "\n" + std::to_string(w) + " " +
                             std::to_string(h) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  write_file(path, out);
}

void save_bytes(const std::string& path, const std::vector<std::uint8_t>& pixels, int w, int h, bool color) {
  const std::string ext = extension(path);
  if (ext == "png") save_png(path, pixels, w, h, color);
  else if (ext == "ppm" || ext == "pgm" || ext == "pnm") save_pnm(path, pixels, w, h, color);
  else throw ImageIoError(path, "unsupported image format '" + ext + "'");
}

}  // namespace

std::variant<RgbImage, GrayImage> load_image(const std::string& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return load_png(bytes, path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) return load_pnm(bytes, path);
  if (bytes.empty()) throw ImageIoError(path, "truncated file");
  throw ImageIoError(path, "unsupported image format");
}

RgbImage load_rgb(const std::string& path) {
  auto img = load_image(path);
  if (auto* rgb = std::get_if<RgbImage>(&img)) return std::move(*rgb);
  return gray_to_rgb(std::get<GrayImage>(img));
}

GrayImage load_gray(const std::string& path) {
  auto img = load_image(path);
  if (auto* gray = std::get_if<GrayImage>(&img)) return std::move(*gray);
  return desaturate(std::get<RgbImage>(img));
}

void save_image(const RgbImage& img, const std::string& path) {
  if (extension(path) == "pgm") return save_image(desaturate(img), path);
  std::vector<std::uint8_t> pixels(img.data().size());
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = to_byte(img.data()[i]);
  save_bytes(path, pixels, img.width(), img.height(), true);
}

void save_image(const GrayImage& img, const std::string& path) {
  if (extension(path) == "ppm") return save_image(gray_to_rgb(img), path);
  std::vector<std::uint8_t> pixels(img.pixel_count());
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = to_byte(img[i]);
  save_bytes(path, pixels, img.width(), img.height(), false);
}

}  // namespace hcolor
