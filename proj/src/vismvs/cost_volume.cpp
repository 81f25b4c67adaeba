#include "vismvs/cost_volume.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vismvs/warp.hpp"

namespace vismvs {

CostVolume::CostVolume(DepthHypotheses hyps, int width, int height, int groups)
    : hyps_(std::move(hyps)), width_(width), height_(height), groups_(groups) {
    if (width < 1 || height < 1 || groups < 1)
        throw std::invalid_argument("CostVolume: bad shape");
    if (hyps_.is_per_pixel() && (hyps_.width() != width || hyps_.height() != height))
        throw std::invalid_argument("CostVolume: hypothesis grid does not match volume");
    const std::size_t n = static_cast<std::size_t>(hyps_.count()) * width * height;
    data_.assign(n * groups, 0.0f);
    valid_.assign(n, 0);
}

ProbabilityVolume::ProbabilityVolume(DepthHypotheses hyps, int width, int height)
    : hyps_(std::move(hyps)), width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("ProbabilityVolume: bad shape");
    if (hyps_.is_per_pixel() && (hyps_.width() != width || hyps_.height() != height))
        throw std::invalid_argument("ProbabilityVolume: hypothesis grid does not match volume");
    data_.assign(static_cast<std::size_t>(hyps_.count()) * width * height, 0.0f);
    valid_ = ValidityMask(width, height, 0);
}

CostVolume build_pair_volume(const FeatureMap& ref, const FeatureMap& src,
                             const CameraModel& ref_cam, const CameraModel& src_cam,
                             const DepthHypotheses& hyps, int groups) {
    if (ref.width() != ref_cam.width || ref.height() != ref_cam.height)
        throw std::invalid_argument("build_pair_volume: reference camera does not match features");
    if (ref.channels() != src.channels())
        throw std::invalid_argument("build_pair_volume: channel mismatch");

    const int w = ref.width(), h = ref.height();
    CostVolume vol(hyps, w, h, groups);
    const std::size_t px = static_cast<std::size_t>(w) * h;

    ImageF depth_slice;
    if (hyps.is_per_pixel()) depth_slice = ImageF(w, h);

    for (int j = 0; j < hyps.count(); ++j) {
        WarpedFeatures warped;
        if (hyps.is_per_pixel()) {
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    depth_slice(x, y) = hyps.value(j, x, y);
            warped = warp_to_reference(src, ref_cam, src_cam, depth_slice);
        } else {
            warped = warp_to_reference(src, ref_cam, src_cam,
                                       static_cast<double>(hyps.value(j)));
        }
        CostMap cm = groupwise_correlation(ref, warped.features, warped.mask, groups);
        std::copy(cm.data().begin(), cm.data().end(), vol.slice(j));
        std::uint8_t* vd = vol.validity().data() + static_cast<std::size_t>(j) * px;
        std::copy(warped.mask.data(), warped.mask.data() + px, vd);
    }
    return vol;
}

namespace {

// Truncated box mean of one W x H plane, separable with running sums.
void box_filter_plane(const float* src, float* dst, float* tmp, int w, int h, int radius) {
    if (radius == 0) {
        std::copy(src, src + static_cast<std::size_t>(w) * h, dst);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const float* in = src + static_cast<std::size_t>(y) * w;
        float* out = tmp + static_cast<std::size_t>(y) * w;
        double acc = 0.0;
        int lo = 0, hi = -1; // current window [lo, hi]
        for (int x = 0; x < w; ++x) {
            const int nlo = std::max(0, x - radius);
            const int nhi = std::min(w - 1, x + radius);
            while (hi < nhi) acc += in[++hi];
            while (lo < nlo) acc -= in[lo++];
            out[x] = static_cast<float>(acc / (nhi - nlo + 1));
        }
    }
#pragma omp parallel for schedule(static)
    for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        int lo = 0, hi = -1;
        for (int y = 0; y < h; ++y) {
            const int nlo = std::max(0, y - radius);
            const int nhi = std::min(h - 1, y + radius);
            while (hi < nhi) { ++hi; acc += tmp[static_cast<std::size_t>(hi) * w + x]; }
            while (lo < nlo) { acc -= tmp[static_cast<std::size_t>(lo) * w + x]; ++lo; }
            dst[static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc / (nhi - nlo + 1));
        }
    }
}

} // namespace

CostVolume regularize_pair(const CostVolume& vol, int box_radius, int depth_radius) {
    if (box_radius < 0 || depth_radius < 0)
        throw std::invalid_argument("regularize_pair: negative radius");

    const int w = vol.width(), h = vol.height();
    const int nd = vol.depth_count();
    const int groups = vol.groups();
    const std::size_t px = static_cast<std::size_t>(w) * h;

    CostVolume out(vol.hypotheses(), w, h, 1);
    out.validity() = vol.validity();

    // Group mean, then spatial box filter per depth slice.
    std::vector<float> meaned(px), smoothed(static_cast<std::size_t>(nd) * px), tmp(px);
    const float ginv = 1.0f / static_cast<float>(groups);
    for (int j = 0; j < nd; ++j) {
        const float* s = vol.slice(j);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(px); ++i) {
            float acc = 0.0f;
            for (int g = 0; g < groups; ++g) acc += s[i * groups + g];
            meaned[i] = acc * ginv;
        }
        box_filter_plane(meaned.data(), smoothed.data() + static_cast<std::size_t>(j) * px,
                         tmp.data(), w, h, box_radius);
    }

    // Triangle filter along the depth axis, truncated and renormalized.
    float* dst = out.data().data();
    if (depth_radius == 0) {
        std::copy(smoothed.begin(), smoothed.end(), dst);
        return out;
    }
    std::vector<float> weights(2 * depth_radius + 1);
    for (int k = -depth_radius; k <= depth_radius; ++k)
        weights[k + depth_radius] = static_cast<float>(depth_radius + 1 - std::abs(k));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(px); ++i) {
        for (int j = 0; j < nd; ++j) {
            double acc = 0.0, wsum = 0.0;
            const int klo = std::max(-depth_radius, -j);
            const int khi = std::min(depth_radius, nd - 1 - j);
            for (int k = klo; k <= khi; ++k) {
                const double wgt = weights[k + depth_radius];
                acc += wgt * smoothed[static_cast<std::size_t>(j + k) * px + i];
                wsum += wgt;
            }
            dst[static_cast<std::size_t>(j) * px + i] = static_cast<float>(acc / wsum);
        }
    }
    return out;
}

ProbabilityVolume to_probability(const CostVolume& latent, double temperature) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("to_probability: temperature must be positive");
    if (latent.groups() != 1)
        throw std::invalid_argument("to_probability: latent volume must have one group");

    const int w = latent.width(), h = latent.height();
    const int nd = latent.depth_count();
    const std::size_t px = static_cast<std::size_t>(w) * h;
    const float* src = latent.data().data();
    const std::uint8_t* valid = latent.validity().data();

    ProbabilityVolume prob(latent.hypotheses(), w, h);
    float* dst = prob.data().data();
    std::uint8_t* pv = prob.validity().data();
    const float inv_t = static_cast<float>(1.0 / temperature);
    const float uniform = 1.0f / static_cast<float>(nd);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(px); ++i) {
        float best = -std::numeric_limits<float>::infinity();
        bool any = false;
        for (int j = 0; j < nd; ++j) {
            const std::size_t k = static_cast<std::size_t>(j) * px + i;
            if (!valid[k]) continue;
            any = true;
            const float v = src[k] * inv_t;
            if (v > best) best = v;
        }
        if (!any) {
            for (int j = 0; j < nd; ++j)
                dst[static_cast<std::size_t>(j) * px + i] = uniform;
            continue;
        }
        pv[i] = 1;
        double sum = 0.0;
        for (int j = 0; j < nd; ++j) {
            const std::size_t k = static_cast<std::size_t>(j) * px + i;
            const float e = valid[k] ? std::exp(src[k] * inv_t - best) : 0.0f;
            dst[k] = e;
            sum += e;
        }
        const float norm = static_cast<float>(1.0 / sum);
        for (int j = 0; j < nd; ++j)
            dst[static_cast<std::size_t>(j) * px + i] *= norm;
    }
    return prob;
}

ImageF soft_argmax(const ProbabilityVolume& p) {
    const int w = p.width(), h = p.height();
    const int nd = p.depth_count();
    const std::size_t px = static_cast<std::size_t>(w) * h;
    const float* src = p.data().data();
    ImageF depth(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            double acc = 0.0;
            for (int j = 0; j < nd; ++j)
                acc += static_cast<double>(p.hypotheses().value(j, x, y)) *
                       src[static_cast<std::size_t>(j) * px + i];
            depth[i] = static_cast<float>(acc);
        }
    }
    return depth;
}

ImageF entropy_map(const ProbabilityVolume& p) {
    const std::size_t px = static_cast<std::size_t>(p.width()) * p.height();
    const int nd = p.depth_count();
    const float* src = p.data().data();
    ImageF ent(p.width(), p.height());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(px); ++i) {
        double acc = 0.0;
        for (int j = 0; j < nd; ++j) {
            const double v = src[static_cast<std::size_t>(j) * px + i];
            if (v > 0.0) acc -= v * std::log(v > 1e-12 ? v : 1e-12);
        }
        ent[i] = static_cast<float>(acc);
    }
    return ent;
}

ImageF log_uncertainty_from_entropy(const ImageF& entropy, int n_hypotheses,
                                    const FuParams& params) {
    if (params.a < 0.0)
        throw std::invalid_argument("log_uncertainty_from_entropy: a must be non-negative");
    if (n_hypotheses < 2)
        throw std::invalid_argument("log_uncertainty_from_entropy: need at least 2 hypotheses");
    const float scale = static_cast<float>(params.a / std::log(static_cast<double>(n_hypotheses)));
    const float bias = static_cast<float>(params.b);
    ImageF s(entropy.width(), entropy.height());
    for (std::size_t i = 0; i < entropy.size(); ++i)
        s[i] = scale * entropy[i] + bias;
    return s;
}

DepthEstimate estimate_from_latent(const CostVolume& latent, double temperature,
                                   const FuParams& params) {
    ProbabilityVolume prob = to_probability(latent, temperature);
    DepthEstimate est;
    est.depth = soft_argmax(prob);
    est.entropy = entropy_map(prob);
    est.log_uncertainty =
        log_uncertainty_from_entropy(est.entropy, latent.depth_count(), params);
    est.validity = prob.validity();
    return est;
}

} // namespace vismvs
