#include "vismvs/hypotheses.hpp"

#include <stdexcept>

namespace vismvs {

namespace {

void check_increasing(const float* v, std::size_t n, std::size_t stride) {
    if (!(v[0] > 0.0f))
        throw std::invalid_argument("DepthHypotheses: depths must be positive");
    for (std::size_t j = 1; j < n; ++j)
        if (!(v[j * stride] > v[(j - 1) * stride]))
            throw std::invalid_argument("DepthHypotheses: not strictly increasing");
}

} // namespace

DepthHypotheses DepthHypotheses::shared(std::vector<float> values) {
    if (values.empty())
        throw std::invalid_argument("DepthHypotheses: empty");
    check_increasing(values.data(), values.size(), 1);
    DepthHypotheses h;
    h.count_ = static_cast<int>(values.size());
    h.values_ = std::move(values);
    return h;
}

DepthHypotheses DepthHypotheses::per_pixel(int count, int width, int height,
                                           std::vector<float> values) {
    if (count < 1 || width < 1 || height < 1)
        throw std::invalid_argument("DepthHypotheses: bad shape");
    const std::size_t px = static_cast<std::size_t>(width) * height;
    if (values.size() != px * count)
        throw std::invalid_argument("DepthHypotheses: value count mismatch");
    for (std::size_t i = 0; i < px; ++i)
        check_increasing(values.data() + i, count, px);
    DepthHypotheses h;
    h.count_ = count;
    h.width_ = width;
    h.height_ = height;
    h.values_ = std::move(values);
    return h;
}

DepthHypotheses uniform_hypotheses(double d_min, double delta, int n) {
    if (n < 2)
        throw std::invalid_argument("uniform_hypotheses: need at least 2 samples");
    if (!(d_min > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("uniform_hypotheses: d_min and delta must be positive");
    const double spacing = 2.0 * delta / n;
    std::vector<float> v(n);
    for (int j = 0; j < n; ++j)
        v[j] = static_cast<float>(d_min + spacing * j);
    return DepthHypotheses::shared(std::move(v));
}

} // namespace vismvs
