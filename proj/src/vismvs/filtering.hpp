#pragma once

#include <array>
#include <span>
#include <vector>

#include "vismvs/camera.hpp"
#include "vismvs/cost_volume.hpp"
#include "vismvs/image.hpp"

namespace vismvs {

struct FilterConfig {
    std::array<double, 3> prob_thresholds = {0.6, 0.6, 0.6}; // p_t per stage
    int min_consistent_views = 2;                            // N_f
    double max_reproj_px = 1.0;                              // tau_px
    double max_rel_depth_err = 0.01;                         // tau_d

    bool operator==(const FilterConfig&) const = default;
};

FilterConfig dtu_filter_preset(); // 0.6/0.6/0.6, N_f = 2
FilterConfig tnt_filter_preset(); // 0.8/0.7/0.8, N_f = 4

/// Per-pixel sum of the probabilities of the hypotheses whose index lies
/// within +-2 of the fractional index of the depth estimate (up to 5
/// planes, fewer at the grid borders).
ImageF probability_map(const ProbabilityVolume& p, const ImageF& depth);

/// Keeps a pixel iff every stage probability map strictly exceeds its
/// threshold. Maps must share the final resolution.
ValidityMask photometric_filter(const std::array<ImageF, 3>& stage_prob_maps,
                                const std::array<double, 3>& thresholds);

struct GeometricConsistency {
    ValidityMask mask;                    // count >= N_f
    Image<int> count;                     // consistent views per pixel
    std::vector<ImageF> roundtrip_depth;  // per view; NaN where inconsistent
};

/// Cross-view consistency: a reference pixel agrees with view i iff the
/// round trip (project at the reference depth, read view i's depth at the
/// hit pixel, reproject into the reference) lands within max_reproj_px and
/// within max_rel_depth_err of the reference depth.
GeometricConsistency geometric_filter(const ImageF& ref_depth, const ValidityMask& ref_valid,
                                      const CameraModel& ref_cam,
                                      std::span<const ImageF> other_depths,
                                      std::span<const ValidityMask> other_valids,
                                      std::span<const CameraModel> other_cams,
                                      const FilterConfig& config);

/// Per-pixel median over {reference depth} + consistent round-trip depths
/// (lower median for even counts).
ImageF median_fuse(const ImageF& ref_depth, const GeometricConsistency& geo);

} // namespace vismvs
