#include "hcolor/checkpoint.hpp"

#include <fstream>
#include <iterator>

#include "binio.hpp"

namespace hcolor {

namespace {

constexpr char kMagic[4] = {'H', 'C', 'L', 'R'};

std::vector<char> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError(path, "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string shape_string(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
  return s + "]";
}

}  // namespace

Model quantize_params(const Model& model) {
  Model out = model;
  for (auto& block : out.params.blocks())
    for (double& v : block.values) v = static_cast<double>(static_cast<float>(v));
  return out;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  detail::ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kCheckpointVersion);
  w.u64(ckpt.model.seed);
  w.str(format_config(ckpt.config));
  auto blocks = const_cast<Model&>(ckpt.model).params.blocks();
  w.u32(static_cast<std::uint32_t>(blocks.size()));
  for (const auto& block : blocks) {
    w.str(block.name);
    w.u32(static_cast<std::uint32_t>(block.shape.size()));
    for (int d : block.shape) w.u32(static_cast<std::uint32_t>(d));
    for (double v : block.values) w.f32(static_cast<float>(v));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError(path, "cannot open file for writing");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw FileFormatError(path, "write failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  const auto bytes = read_all(path);
  detail::ByteReader r(bytes, path);
  if (bytes.size() < 4) r.fail("unexpected end of file");
  if (r.raw(4) != std::string(kMagic, 4)) r.fail("bad magic");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    r.fail("version mismatch (file " + std::to_string(version) + ", expected " +
           std::to_string(kCheckpointVersion) + ")");
  const std::uint64_t seed = r.u64();
  Checkpoint ckpt;
  try {
    ckpt.config = parse_config(r.str());
  } catch (const ConfigError& e) {
    r.fail(std::string("invalid embedded config: ") + e.what());
  }
  ckpt.model = init_model(ckpt.config.net, seed);
  auto blocks = ckpt.model.params.blocks();
  const std::uint32_t count = r.u32();
  if (count != blocks.size())
    r.fail("shape mismatch: " + std::to_string(count) + " tensors, config implies " + std::to_string(blocks.size()));
  for (auto& block : blocks) {
    const std::string name = r.str(1024);
    const std::uint32_t rank = r.u32();
    if (rank > 8) r.fail("shape mismatch: tensor '" + name + "' has rank " + std::to_string(rank));
    std::vector<int> shape(rank);
    for (auto& d : shape) d = static_cast<int>(r.u32());
    if (name != block.name || shape != block.shape)
      r.fail("shape mismatch: got " + name + shape_string(shape) + ", expected " + block.name +
             shape_string(block.shape));
    for (double& v : block.values) v = r.f32();
  }
  if (!r.at_end()) r.fail("trailing bytes after last tensor");
  return ckpt;
}

}  // namespace hcolor
