#pragma once

#include <vector>

#include "vismvs/image.hpp"

namespace vismvs {

/// Ordered depth hypothesis planes, either shared by all pixels or one
/// strictly increasing list per pixel (same count everywhere). Storage is
/// plane-major: per-pixel value j lives at (j*H + y)*W + x.
class DepthHypotheses {
public:
    DepthHypotheses() = default;

    static DepthHypotheses shared(std::vector<float> values);
    static DepthHypotheses per_pixel(int count, int width, int height,
                                     std::vector<float> values);

    int count() const { return count_; }
    bool is_per_pixel() const { return width_ > 0; }
    int width() const { return width_; }
    int height() const { return height_; }

    float value(int j) const { return values_[j]; }
    float value(int j, int x, int y) const {
        return is_per_pixel()
                   ? values_[(static_cast<std::size_t>(j) * height_ + y) * width_ + x]
                   : values_[j];
    }

    const std::vector<float>& values() const { return values_; }

    bool operator==(const DepthHypotheses&) const = default;

private:
    int count_ = 0;
    int width_ = 0; // 0 for the shared variant
    int height_ = 0;
    std::vector<float> values_;
};

/// n planes uniformly covering [d_min, d_min + 2*delta): first sample at
/// d_min, spacing 2*delta/n.
DepthHypotheses uniform_hypotheses(double d_min, double delta, int n);

} // namespace vismvs
