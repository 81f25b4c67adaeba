#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vismvs {

/// Dense row-major single-channel raster. Pixel centers sit at integer
/// coordinates; (0,0) is the top-left pixel.
template <typename T>
class Image {
public:
    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height, fill) {
        if (width < 0 || height < 0)
            throw std::invalid_argument("Image: negative dimensions");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int x, int y) { return data_[idx(x, y)]; }
    const T& operator()(int x, int y) const { return data_[idx(x, y)]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
    const T* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    template <typename U>
    bool same_size(const Image<U>& o) const {
        return width_ == o.width() && height_ == o.height();
    }

    bool operator==(const Image&) const = default;

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using ImageF = Image<float>;
using ImageRGB = Image<std::array<std::uint8_t, 3>>;

/// Per-pixel boolean companion to a map of the same dimensions
/// (nonzero = valid).
using ValidityMask = Image<std::uint8_t>;

inline std::size_t count_valid(const ValidityMask& m) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < m.size(); ++i) n += m[i] ? 1 : 0;
    return n;
}

/// Bilinear sample with clamp-to-edge neighbors. Callers are expected to
/// have range-checked (x,y) if out-of-bounds values are meaningful.
inline float bilinear_sample(const ImageF& img, double x, double y) {
    const int w = img.width(), h = img.height();
    double xc = std::clamp(x, 0.0, static_cast<double>(w - 1));
    double yc = std::clamp(y, 0.0, static_cast<double>(h - 1));
    int x0 = static_cast<int>(xc);
    int y0 = static_cast<int>(yc);
    int x1 = std::min(x0 + 1, w - 1);
    int y1 = std::min(y0 + 1, h - 1);
    float dx = static_cast<float>(xc - x0);
    float dy = static_cast<float>(yc - y0);
    float v00 = img(x0, y0), v10 = img(x1, y0);
    float v01 = img(x0, y1), v11 = img(x1, y1);
    float top = v00 + dx * (v10 - v00);
    float bot = v01 + dx * (v11 - v01);
    return top + dy * (bot - top);
}

/// 2x area-average downsample. Both dimensions must be even.
inline ImageF downsample_area2(const ImageF& img) {
    if (img.width() % 2 != 0 || img.height() % 2 != 0)
        throw std::invalid_argument("downsample_area2: odd dimensions");
    ImageF out(img.width() / 2, img.height() / 2);
    for (int y = 0; y < out.height(); ++y) {
        const float* r0 = img.row(2 * y);
        const float* r1 = img.row(2 * y + 1);
        for (int x = 0; x < out.width(); ++x) {
            out(x, y) = 0.25f * (r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]);
        }
    }
    return out;
}

} // namespace vismvs
