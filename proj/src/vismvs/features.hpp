#pragma once

#include <array>
#include <vector>

#include "vismvs/image.hpp"

namespace vismvs {

inline constexpr int kFeatureChannels = 32;
inline constexpr int kCorrelationGroups = 8;

/// Dense H x W x C raster with channels interleaved per pixel
/// ((y*W + x)*C + c). scale is the resolution relative to the input image.
class FeatureMap {
public:
    FeatureMap() = default;
    FeatureMap(int width, int height, int channels, double scale = 1.0)
        : width_(width), height_(height), channels_(channels), scale_(scale),
          data_(static_cast<std::size_t>(width) * height * channels, 0.0f) {}

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    double scale() const { return scale_; }

    float* pixel(int x, int y) { return data_.data() + offset(x, y); }
    const float* pixel(int x, int y) const { return data_.data() + offset(x, y); }
    float& at(int x, int y, int c) { return data_[offset(x, y) + c]; }
    float at(int x, int y, int c) const { return data_[offset(x, y) + c]; }

    std::vector<float>& data() { return data_; }
    const std::vector<float>& data() const { return data_; }

private:
    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    double scale_ = 1.0;
    std::vector<float> data_;
};

/// One correlation value per group, same layout as FeatureMap.
using CostMap = FeatureMap;

/// RGB to grayscale by luma weights 0.299/0.587/0.114, output in [0,1].
ImageF to_grayscale(const ImageRGB& image);

/// The fixed 32-channel bank: intensity, Gaussian-smoothed intensity
/// (sigma 1 and 2), x/y derivatives of Gaussian at both sigmas, local
/// standard deviation (5x5), and 8-direction soft census comparisons at
/// radii 1, 2, 3. No standardization.
FeatureMap filter_bank(const ImageF& gray, double scale);

/// In-place per-channel standardization to zero mean / unit variance.
void standardize(FeatureMap& fm);

/// Standardized feature maps at scales 1/4, 1/2 and 1 (in that order).
/// Image dimensions must be divisible by 4; each level is produced by area
/// averaging before filtering.
std::array<FeatureMap, 3> extract_pyramid(const ImageF& gray);

/// Group-wise correlation: channels split into `groups` contiguous blocks,
/// output per group is the mean over the block of ref_c * warped_c. Pixels
/// masked invalid produce 0 in every group.
CostMap groupwise_correlation(const FeatureMap& ref, const FeatureMap& warped,
                              const ValidityMask& mask, int groups);

} // namespace vismvs
