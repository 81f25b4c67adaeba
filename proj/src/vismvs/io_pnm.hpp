#pragma once

#include <filesystem>

#include "vismvs/image.hpp"

namespace vismvs {

/// Binary PPM (P6) and PGM (P5), maxval 255.
void save_ppm(const std::filesystem::path& path, const ImageRGB& image);
ImageRGB load_ppm(const std::filesystem::path& path);

void save_pgm(const std::filesystem::path& path, const ValidityMask& mask);
ValidityMask load_pgm(const std::filesystem::path& path);

/// Loads PPM or PGM (by header magic) as grayscale in [0,1].
ImageF load_image_gray(const std::filesystem::path& path);

/// Grayscale [0,1] quantized to an 8-bit RGB triplet (r = g = b).
ImageRGB gray_to_rgb(const ImageF& gray);

} // namespace vismvs
