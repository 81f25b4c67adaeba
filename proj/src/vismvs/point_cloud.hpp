#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "vismvs/camera.hpp"
#include "vismvs/image.hpp"

namespace vismvs {

struct PointCloud {
    std::vector<std::array<float, 3>> points; // world coordinates
    std::vector<std::array<std::uint8_t, 3>> colors;
};

/// One point per masked pixel, backprojected to world at its depth and
/// colored from the reference image. Pixels are visited in row-major order.
PointCloud cloud_from_depth(const ImageF& depth, const ValidityMask& mask,
                            const CameraModel& cam, const ImageRGB& image);

/// Binary little-endian PLY: float32 x/y/z plus uchar red/green/blue.
void save_ply(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud load_ply(const std::filesystem::path& path);

} // namespace vismvs
