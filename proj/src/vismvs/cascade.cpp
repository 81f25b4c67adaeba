#include "vismvs/cascade.hpp"

#include <cmath>
#include <stdexcept>

#include "vismvs/filtering.hpp"
#include "vismvs/warp.hpp"

namespace vismvs {

void CascadeConfig::validate() const {
    if (!(d_min > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("CascadeConfig: d_min and delta must be positive");
    for (int k = 0; k < 3; ++k) {
        const StageConfig& s = stages[k];
        if (s.n_hypotheses < 2)
            throw std::invalid_argument("CascadeConfig: need at least 2 hypotheses per stage");
        if (k > 0 && !(s.range_scale > 0.0 && s.range_scale < 1.0))
            throw std::invalid_argument("CascadeConfig: range scale must be in (0,1)");
        if (s.scale_divisor != 1 && s.scale_divisor != 2 && s.scale_divisor != 4)
            throw std::invalid_argument("CascadeConfig: scale divisor must be 1, 2 or 4");
        if (!(s.temperature > 0.0))
            throw std::invalid_argument("CascadeConfig: temperature must be positive");
        if (s.box_radius < 0 || s.depth_radius < 0)
            throw std::invalid_argument("CascadeConfig: negative smoothing radius");
    }
    if (fu.a < 0.0)
        throw std::invalid_argument("CascadeConfig: f_u slope must be non-negative");
}

DepthHypotheses per_pixel_hypotheses(const ImageF& prev_depth, double range_scale,
                                     double delta, int n, double d_floor) {
    if (n < 2)
        throw std::invalid_argument("per_pixel_hypotheses: need at least 2 samples");
    if (!(range_scale > 0.0 && range_scale < 1.0))
        throw std::invalid_argument("per_pixel_hypotheses: range scale must be in (0,1)");
    if (!(delta > 0.0) || !(d_floor > 0.0))
        throw std::invalid_argument("per_pixel_hypotheses: delta and d_floor must be positive");

    const int w = prev_depth.width(), h = prev_depth.height();
    const std::size_t px = static_cast<std::size_t>(w) * h;
    const double half = range_scale * delta;
    const double spacing = 2.0 * half / n;
    std::vector<float> values(px * n);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double center = prev_depth(x, y);
            if (!std::isfinite(center)) center = d_floor + half;
            const double start = std::max(d_floor, center - half);
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            for (int j = 0; j < n; ++j)
                values[static_cast<std::size_t>(j) * px + i] =
                    static_cast<float>(start + spacing * j);
        }
    }
    return DepthHypotheses::per_pixel(n, w, h, std::move(values));
}

ImageF upsample_depth(const ImageF& depth) {
    ImageF out(depth.width() * 2, depth.height() * 2);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x)
            out(x, y) = bilinear_sample(depth, (x - 0.5) / 2.0, (y - 0.5) / 2.0);
    }
    return out;
}

ValidityMask upsample_mask(const ValidityMask& mask) {
    ValidityMask out(mask.width() * 2, mask.height() * 2);
    for (int y = 0; y < out.height(); ++y) {
        const int sy = std::clamp(static_cast<int>(std::lround((y - 0.5) / 2.0)), 0,
                                  mask.height() - 1);
        for (int x = 0; x < out.width(); ++x) {
            const int sx = std::clamp(static_cast<int>(std::lround((x - 0.5) / 2.0)), 0,
                                      mask.width() - 1);
            out(x, y) = mask(sx, sy);
        }
    }
    return out;
}

namespace {

int pyramid_index(int scale_divisor) {
    switch (scale_divisor) {
    case 4: return 0;
    case 2: return 1;
    default: return 2;
    }
}

} // namespace

std::vector<StageResult> infer_depth(const ImageF& ref_image, const CameraModel& ref_cam,
                                     std::span<const ImageF> src_images,
                                     std::span<const CameraModel> src_cams,
                                     const CascadeConfig& config) {
    config.validate();
    if (src_images.empty())
        throw std::invalid_argument("infer_depth: need at least one source view");
    if (src_images.size() != src_cams.size())
        throw std::invalid_argument("infer_depth: view count does not match camera count");
    if (ref_image.width() != ref_cam.width || ref_image.height() != ref_cam.height)
        throw std::invalid_argument("infer_depth: reference image does not match camera");
    for (std::size_t i = 0; i < src_images.size(); ++i)
        if (src_images[i].width() != src_cams[i].width ||
            src_images[i].height() != src_cams[i].height)
            throw std::invalid_argument("infer_depth: source image does not match camera");

    const std::size_t nv = src_images.size();
    const double d_floor = 1e-3 * config.d_min;

    const std::array<FeatureMap, 3> ref_pyr = extract_pyramid(ref_image);
    std::vector<std::array<FeatureMap, 3>> src_pyrs(nv);
    for (std::size_t i = 0; i < nv; ++i) src_pyrs[i] = extract_pyramid(src_images[i]);

    std::vector<StageResult> results;
    results.reserve(3);
    ImageF prev_depth;

    for (int k = 0; k < 3; ++k) {
        const StageConfig& stage = config.stages[k];
        const int level = pyramid_index(stage.scale_divisor);
        const CameraModel ref_scaled = scale_camera(ref_cam, stage.scale_divisor);

        DepthHypotheses hyps;
        if (k == 0) {
            hyps = uniform_hypotheses(config.d_min, config.delta, stage.n_hypotheses);
        } else {
            ImageF center = upsample_depth(prev_depth);
            if (center.width() != ref_scaled.width || center.height() != ref_scaled.height)
                throw std::invalid_argument("infer_depth: stage resolutions must double");
            hyps = per_pixel_hypotheses(center, stage.range_scale, config.delta,
                                        stage.n_hypotheses, d_floor);
        }

        StageResult res;
        std::vector<CostVolume> latents;
        std::vector<ImageF> s_maps;
        latents.reserve(nv);
        s_maps.reserve(nv);
        for (std::size_t i = 0; i < nv; ++i) {
            const CameraModel src_scaled = scale_camera(src_cams[i], stage.scale_divisor);
            CostVolume vol = build_pair_volume(ref_pyr[level], src_pyrs[i][level],
                                               ref_scaled, src_scaled, hyps);
            CostVolume latent = regularize_pair(vol, stage.box_radius, stage.depth_radius);
            res.pair_estimates.push_back(
                estimate_from_latent(latent, stage.temperature, config.fu));
            s_maps.push_back(res.pair_estimates.back().log_uncertainty);
            latents.push_back(std::move(latent));
        }

        CostVolume fused = fuse_volumes(latents, s_maps, config.strategy);
        latents.clear();
        if (config.strategy == FusionStrategy::variance) {
            // Variance measures cross-view inconsistency while correlations
            // measure consistency; flip the sign so the softmax still favors
            // photo-consistent hypotheses.
            for (float& v : fused.data()) v = -v;
        }
        res.fused_probability = regularize_fused(fused, stage.box_radius,
                                                 stage.depth_radius, stage.temperature);

        DepthEstimate final_est;
        final_est.depth = soft_argmax(res.fused_probability);
        final_est.entropy = entropy_map(res.fused_probability);
        final_est.log_uncertainty =
            log_uncertainty_from_entropy(final_est.entropy, stage.n_hypotheses, config.fu);
        final_est.validity = res.fused_probability.validity();
        res.probability_map = probability_map(res.fused_probability, final_est.depth);
        res.final_estimate = std::move(final_est);

        prev_depth = res.final_estimate.depth;
        results.push_back(std::move(res));
    }
    return results;
}

double final_stage_interval(const CascadeConfig& config) {
    return 2.0 * config.stages[2].range_scale * config.delta / config.stages[2].n_hypotheses;
}

} // namespace vismvs
