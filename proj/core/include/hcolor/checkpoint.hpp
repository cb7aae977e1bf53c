#pragma once

#include <cstdint>
#include <string>

#include "hcolor/config.hpp"
#include "hcolor/errors.hpp"
#include "hcolor/net.hpp"

namespace hcolor {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  PipelineConfig config;
  Model model;
};

/// "HCLR", u32 version, u64 seed, config text, then per tensor a name and
/// shape header followed by little-endian f32 values.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
/// Throws FileFormatError with reason "bad magic", "version mismatch",
/// "shape mismatch ..." or "unexpected end of file".
Checkpoint load_checkpoint(const std::string& path);

/// Parameters rounded through float, as a save/load round trip would.
Model quantize_params(const Model& model);

}  // namespace hcolor
