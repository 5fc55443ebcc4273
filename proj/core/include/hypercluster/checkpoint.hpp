#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "hypercluster/hypernet.hpp"

namespace hypercluster {

/// Binary model file:
///   "FHNC" | u32 version (=1) | u32 n | n bytes of JSON metadata |
///   float32 arrays, little endian: RFF frequencies, then parameters() order.
/// All integers are little endian. The metadata lists every array's name and
/// shape.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    HyperNet net;
    std::uint64_t seed = 0;
    std::uint64_t step = 0;
};

void save_checkpoint(const Checkpoint& ckpt, std::ostream& out);
/// Writes to a temporary sibling file and renames it into place.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

/// Throws FormatError on bad magic, an unsupported version or truncation.
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace hypercluster
