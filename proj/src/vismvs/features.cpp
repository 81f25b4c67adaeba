#include "vismvs/features.hpp"

#include <cmath>
#include <stdexcept>

namespace vismvs {

namespace {

std::vector<float> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<float> k(2 * radius + 1);
    double sum = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        double w = std::exp(-0.5 * t * t / (sigma * sigma));
        k[t + radius] = static_cast<float>(w);
        sum += w;
    }
    for (float& w : k) w = static_cast<float>(w / sum);
    return k;
}

// Derivative taps normalized to unit response on a unit-slope ramp.
std::vector<float> derivative_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<float> k(2 * radius + 1);
    double norm = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        double g = std::exp(-0.5 * t * t / (sigma * sigma));
        k[t + radius] = static_cast<float>(t * g);
        norm += t * t * g;
    }
    for (float& w : k) w = static_cast<float>(w / norm);
    return k;
}

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

ImageF convolve_horizontal(const ImageF& img, const std::vector<float>& kernel) {
    const int w = img.width(), h = img.height();
    const int radius = static_cast<int>(kernel.size()) / 2;
    ImageF out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const float* src = img.row(y);
        float* dst = out.row(y);
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[t + radius] * src[clampi(x + t, 0, w - 1)];
            dst[x] = acc;
        }
    }
    return out;
}

ImageF convolve_vertical(const ImageF& img, const std::vector<float>& kernel) {
    const int w = img.width(), h = img.height();
    const int radius = static_cast<int>(kernel.size()) / 2;
    ImageF out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        float* dst = out.row(y);
        for (int t = -radius; t <= radius; ++t) {
            const float* src = img.row(clampi(y + t, 0, h - 1));
            const float k = kernel[t + radius];
            for (int x = 0; x < w; ++x) dst[x] += k * src[x];
        }
    }
    return out;
}

ImageF local_std(const ImageF& img, int radius) {
    const int w = img.width(), h = img.height();
    ImageF out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0, sum2 = 0.0;
            int n = 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                const float* row = img.row(yy);
                for (int dx = -radius; dx <= radius; ++dx) {
                    int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    sum += row[xx];
                    sum2 += static_cast<double>(row[xx]) * row[xx];
                    ++n;
                }
            }
            double mean = sum / n;
            double var = sum2 / n - mean * mean;
            out(x, y) = static_cast<float>(std::sqrt(var > 0.0 ? var : 0.0));
        }
    }
    return out;
}

constexpr int kCensusDirs[8][2] = {{1, 0},  {1, 1},   {0, 1},  {-1, 1},
                                   {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr float kCensusSoftness = 0.05f;

} // namespace

ImageF to_grayscale(const ImageRGB& image) {
    ImageF out(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto& p = image[i];
        out[i] = (0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2]) / 255.0f;
    }
    return out;
}

FeatureMap filter_bank(const ImageF& gray, double scale) {
    const int w = gray.width(), h = gray.height();
    FeatureMap fm(w, h, kFeatureChannels, scale);

    const auto g1 = gaussian_kernel(1.0);
    const auto g2 = gaussian_kernel(2.0);
    const auto d1 = derivative_kernel(1.0);
    const auto d2 = derivative_kernel(2.0);

    std::array<ImageF, 8> planes = {
        gray,
        convolve_vertical(convolve_horizontal(gray, g1), g1),
        convolve_vertical(convolve_horizontal(gray, g2), g2),
        local_std(gray, 2),
        convolve_vertical(convolve_horizontal(gray, d1), g1),
        convolve_horizontal(convolve_vertical(gray, d1), g1),
        convolve_vertical(convolve_horizontal(gray, d2), g2),
        convolve_horizontal(convolve_vertical(gray, d2), g2),
    };

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float* out = fm.pixel(x, y);
            for (int c = 0; c < 8; ++c) out[c] = planes[c](x, y);
            const float center = gray(x, y);
            int c = 8;
            for (int radius = 1; radius <= 3; ++radius) {
                for (const auto& dir : kCensusDirs) {
                    int xx = clampi(x + radius * dir[0], 0, w - 1);
                    int yy = clampi(y + radius * dir[1], 0, h - 1);
                    out[c++] = std::tanh((gray(xx, yy) - center) / kCensusSoftness);
                }
            }
        }
    }
    return fm;
}

void standardize(FeatureMap& fm) {
    const std::size_t px = static_cast<std::size_t>(fm.width()) * fm.height();
    const int nc = fm.channels();
    float* data = fm.data().data();
    for (int c = 0; c < nc; ++c) {
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < px; ++i) {
            double v = data[i * nc + c];
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / px;
        const double var = sum2 / px - mean * mean;
        const float mu = static_cast<float>(mean);
        const float inv = static_cast<float>(1.0 / std::max(std::sqrt(var > 0.0 ? var : 0.0), 1e-8));
        for (std::size_t i = 0; i < px; ++i)
            data[i * nc + c] = (data[i * nc + c] - mu) * inv;
    }
}

std::array<FeatureMap, 3> extract_pyramid(const ImageF& gray) {
    if (gray.width() % 4 != 0 || gray.height() % 4 != 0)
        throw std::invalid_argument("extract_pyramid: dimensions must be divisible by 4");
    ImageF half = downsample_area2(gray);
    ImageF quarter = downsample_area2(half);
    std::array<FeatureMap, 3> levels = {
        filter_bank(quarter, 0.25),
        filter_bank(half, 0.5),
        filter_bank(gray, 1.0),
    };
    for (FeatureMap& fm : levels) standardize(fm);
    return levels;
}

CostMap groupwise_correlation(const FeatureMap& ref, const FeatureMap& warped,
                              const ValidityMask& mask, int groups) {
    if (ref.width() != warped.width() || ref.height() != warped.height() ||
        ref.channels() != warped.channels())
        throw std::invalid_argument("groupwise_correlation: shape mismatch");
    if (mask.width() != ref.width() || mask.height() != ref.height())
        throw std::invalid_argument("groupwise_correlation: mask shape mismatch");
    if (groups < 1 || ref.channels() % groups != 0)
        throw std::invalid_argument("groupwise_correlation: channels not divisible by groups");

    const int w = ref.width(), h = ref.height();
    const int gsize = ref.channels() / groups;
    const float inv = 1.0f / static_cast<float>(gsize);
    CostMap out(w, h, groups, ref.scale());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float* o = out.pixel(x, y);
            if (!mask(x, y)) continue; // stays 0
            const float* a = ref.pixel(x, y);
            const float* b = warped.pixel(x, y);
            for (int g = 0; g < groups; ++g) {
                float acc = 0.0f;
                const int base = g * gsize;
                for (int c = 0; c < gsize; ++c)
                    acc += a[base + c] * b[base + c];
                o[g] = acc * inv;
            }
        }
    }
    return out;
}

} // namespace vismvs
