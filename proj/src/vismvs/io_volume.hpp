#pragma once

#include <filesystem>

#include "vismvs/cost_volume.hpp"

namespace vismvs {

/// Debug dump: a short text header (dims and, for shared grids, the
/// hypothesis depths) followed by the raw little-endian float32 volume in
/// storage order.
void dump_probability_volume(const std::filesystem::path& path, const ProbabilityVolume& p);
ProbabilityVolume load_probability_volume(const std::filesystem::path& path);

} // namespace vismvs
