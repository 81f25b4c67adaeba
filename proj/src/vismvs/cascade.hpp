#pragma once

#include <array>
#include <span>
#include <vector>

#include "vismvs/cost_volume.hpp"
#include "vismvs/fusion.hpp"

namespace vismvs {

struct StageConfig {
    int n_hypotheses = 32;
    double range_scale = 0.0; // w_k, in (0,1) for stages 2 and 3
    int scale_divisor = 4;    // feature pyramid level (4, 2 or 1)
    int box_radius = 2;       // spatial smoothing radius r_s
    int depth_radius = 1;     // depth-axis smoothing radius r_d
    double temperature = 1.0; // softmax temperature

    bool operator==(const StageConfig&) const = default;
};

struct CascadeConfig {
    double d_min = 0.0;
    double delta = 0.0; // half-range: stage 1 covers [d_min, d_min + 2*delta)
    std::array<StageConfig, 3> stages = {
        StageConfig{32, 0.0, 4, 2, 1, 1.0},
        StageConfig{16, 0.25, 2, 2, 1, 1.0},
        StageConfig{8, 0.0625, 1, 2, 1, 1.0},
    };
    FusionStrategy strategy = FusionStrategy::vis_weighted;
    FuParams fu;

    void validate() const;

    bool operator==(const CascadeConfig&) const = default;
};

struct StageResult {
    DepthEstimate final_estimate;             // D_{k,0} and fused entropy/S
    std::vector<DepthEstimate> pair_estimates; // D_{k,i}, S_{k,i} per source
    ProbabilityVolume fused_probability;      // P_k
    ImageF probability_map;                   // per-stage filter map
};

/// Per-pixel hypothesis ranges for stages 2/3: n uniform samples covering
/// [prev - w*delta, prev + w*delta) with the start clamped at d_floor
/// (spacing, and hence range width, is preserved by the clamp). Non-finite
/// previous depths fall back to a floor-anchored range.
DepthHypotheses per_pixel_hypotheses(const ImageF& prev_depth, double range_scale,
                                     double delta, int n, double d_floor);

/// 2x bilinear upsample aligned with the area-average pyramid (sample at
/// (x - 0.5) / 2).
ImageF upsample_depth(const ImageF& depth);

/// 2x nearest-neighbor upsample for masks.
ValidityMask upsample_mask(const ValidityMask& mask);

/// The three-stage coarse-to-fine pipeline: stage 1 sweeps uniform
/// hypotheses at 1/4 resolution; stages 2 and 3 sweep per-pixel ranges
/// centered on the upsampled previous depth. Each stage builds per-pair
/// latent volumes, estimates pair depth/uncertainty, fuses with the
/// configured strategy and regresses the stage depth.
std::vector<StageResult> infer_depth(const ImageF& ref_image, const CameraModel& ref_cam,
                                     std::span<const ImageF> src_images,
                                     std::span<const CameraModel> src_cams,
                                     const CascadeConfig& config);

/// Hypothesis spacing of the final stage as a scene-level scalar:
/// 2 * w3 * delta / N_{d,3}.
double final_stage_interval(const CascadeConfig& config);

} // namespace vismvs
