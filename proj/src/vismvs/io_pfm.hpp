#pragma once

#include <filesystem>

#include "vismvs/image.hpp"

namespace vismvs {

/// Grayscale PFM ("Pf"): little-endian float32, bottom-up scanlines
/// (scale header -1.0 on write; big-endian files are byte-swapped on read).
void save_pfm(const std::filesystem::path& path, const ImageF& map);
ImageF load_pfm(const std::filesystem::path& path);

} // namespace vismvs
