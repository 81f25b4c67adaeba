// Test-only reference implementations, independent of the library paths
// they are used to check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vismvs/camera.hpp"
#include "vismvs/image.hpp"

namespace oracle {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& g) {
    Eigen::Quaterniond q(uniform(g, -1, 1), uniform(g, -1, 1), uniform(g, -1, 1),
                         uniform(g, -1, 1));
    q.normalize();
    return q.toRotationMatrix();
}

inline vismvs::CameraModel random_camera(std::mt19937_64& g, int width = 64,
                                         int height = 48) {
    vismvs::CameraModel cam;
    const double f = uniform(g, 40.0, 200.0);
    cam.intrinsics << f, 0, uniform(g, 10.0, width - 10.0), 0, f * uniform(g, 0.9, 1.1),
        uniform(g, 10.0, height - 10.0), 0, 0, 1;
    cam.rotation = random_rotation(g);
    cam.translation = Eigen::Vector3d(uniform(g, -2, 2), uniform(g, -2, 2), uniform(g, -2, 2));
    cam.width = width;
    cam.height = height;
    return cam;
}

/// Clamped bilinear interpolation written from the textbook formula.
inline double bilinear(const vismvs::ImageF& img, double x, double y) {
    const int w = img.width(), h = img.height();
    x = std::min(std::max(x, 0.0), static_cast<double>(w - 1));
    y = std::min(std::max(y, 0.0), static_cast<double>(h - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double a = x - x0, b = y - y0;
    return (1 - a) * (1 - b) * img(x0, y0) + a * (1 - b) * img(x1, y0) +
           (1 - a) * b * img(x0, y1) + a * b * img(x1, y1);
}

/// Dense truncated-mean box filter, quadratic reference version.
inline std::vector<double> box_filter_ref(const std::vector<double>& src, int w, int h,
                                          int radius) {
    std::vector<double> out(src.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            int n = 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || xx >= w || yy < 0 || yy >= h) continue;
                    acc += src[static_cast<std::size_t>(yy) * w + xx];
                    ++n;
                }
            }
            out[static_cast<std::size_t>(y) * w + x] = acc / n;
        }
    }
    return out;
}

/// Truncated, renormalized triangle filter along the leading (depth) axis.
inline std::vector<double> depth_triangle_ref(const std::vector<double>& src, int nd,
                                              std::size_t plane, int radius) {
    std::vector<double> out(src.size(), 0.0);
    for (int j = 0; j < nd; ++j) {
        for (std::size_t i = 0; i < plane; ++i) {
            double acc = 0.0, wsum = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int jj = j + k;
                if (jj < 0 || jj >= nd) continue;
                const double wgt = radius + 1 - std::abs(k);
                acc += wgt * src[static_cast<std::size_t>(jj) * plane + i];
                wsum += wgt;
            }
            out[static_cast<std::size_t>(j) * plane + i] = acc / wsum;
        }
    }
    return out;
}

/// Plain softmax over a vector.
inline std::vector<double> softmax_ref(const std::vector<double>& v, double temperature) {
    std::vector<double> out(v.size());
    double best = v[0];
    for (double x : v) best = std::max(best, x);
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp((v[i] - best) / temperature);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

inline double entropy_ref(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log(x);
    return h;
}

} // namespace oracle
