#include "hcolor/field_io.hpp"

#include <fstream>
#include <iterator>

#include "binio.hpp"

namespace hcolor {

namespace {

constexpr char kMagic[4] = {'H', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_field(const HistogramField& field, const std::string& path) {
  detail::ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(field.width()));
  w.u32(static_cast<std::uint32_t>(field.height()));
  w.u32(static_cast<std::uint32_t>(field.channels().size()));
  for (const auto& ch : field.channels()) {
    w.str(ch.name);
    w.str(to_string(ch.spec.kind));
    w.u32(static_cast<std::uint32_t>(ch.spec.bins));
    w.u32(static_cast<std::uint32_t>(ch.bins));
    w.f64(ch.spec.sigma);
    w.f64(ch.spec.mu);
    w.f64(ch.spec.range_lo);
    w.f64(ch.spec.range_hi);
  }
  for (const auto& ch : field.channels())
    for (double p : ch.probs) w.f32(static_cast<float>(p));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError(path, "cannot open file for writing");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw FileFormatError(path, "write failed");
}

HistogramField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError(path, "cannot open file");
  const std::vector<char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  detail::ByteReader r(bytes, path);
  if (r.raw(4) != std::string(kMagic, 4)) r.fail("bad magic");
  if (r.u32() != kVersion) r.fail("version mismatch");
  const int width = static_cast<int>(r.u32());
  const int height = static_cast<int>(r.u32());
  const std::uint32_t count = r.u32();
  if (width <= 0 || height <= 0 || width > (1 << 16) || height > (1 << 16) || count > 16)
    r.fail("implausible field header");
  HistogramField field(width, height);
  for (std::uint32_t c = 0; c < count; ++c) {
    std::string name = r.str(256);
    BinSpec spec;
    try {
      spec.kind = bin_kind_from_string(r.str(64));
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    spec.bins = static_cast<int>(r.u32());
    const int k = static_cast<int>(r.u32());
    spec.sigma = r.f64();
    spec.mu = r.f64();
    spec.range_lo = r.f64();
    spec.range_hi = r.f64();
    const int expected = spec.kind == BinKind::joint_gaussian ? spec.bins * spec.bins : spec.bins;
    if (spec.bins <= 0 || spec.bins > 4096 || k != expected) r.fail("inconsistent bin count for channel " + name);
    try {
      field.add_channel(std::move(name), spec, k);
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
  }
  for (auto& ch : field.channels())
    for (double& p : ch.probs) p = r.f32();
  if (!r.at_end()) r.fail("trailing bytes after last channel");
  if (!field.is_valid(1e-5)) r.fail("distributions are not normalized");
  return field;
}

}  // namespace hcolor
