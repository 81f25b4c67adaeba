#pragma once

#include "vismvs/camera.hpp"
#include "vismvs/features.hpp"
#include "vismvs/hypotheses.hpp"
#include "vismvs/image.hpp"

namespace vismvs {

/// N_d x H x W x N_c stack of group-wise correlation costs, with per
/// (pixel, depth) validity from the warp masks. Layout is plane-major:
/// value (d, x, y, g) at ((d*H + y)*W + x)*N_c + g.
class CostVolume {
public:
    CostVolume() = default;
    CostVolume(DepthHypotheses hyps, int width, int height, int groups);

    int depth_count() const { return hyps_.count(); }
    int width() const { return width_; }
    int height() const { return height_; }
    int groups() const { return groups_; }
    const DepthHypotheses& hypotheses() const { return hyps_; }

    float& at(int d, int x, int y, int g) { return data_[value_index(d, x, y) * groups_ + g]; }
    float at(int d, int x, int y, int g) const { return data_[value_index(d, x, y) * groups_ + g]; }
    std::uint8_t& valid(int d, int x, int y) { return valid_[value_index(d, x, y)]; }
    std::uint8_t valid(int d, int x, int y) const { return valid_[value_index(d, x, y)]; }

    float* slice(int d) { return data_.data() + value_index(d, 0, 0) * groups_; }
    const float* slice(int d) const { return data_.data() + value_index(d, 0, 0) * groups_; }

    std::vector<float>& data() { return data_; }
    const std::vector<float>& data() const { return data_; }
    std::vector<std::uint8_t>& validity() { return valid_; }
    const std::vector<std::uint8_t>& validity() const { return valid_; }

private:
    std::size_t value_index(int d, int x, int y) const {
        return (static_cast<std::size_t>(d) * height_ + y) * width_ + x;
    }

    DepthHypotheses hyps_;
    int width_ = 0;
    int height_ = 0;
    int groups_ = 0;
    std::vector<float> data_;
    std::vector<std::uint8_t> valid_;
};

/// Per-pixel distribution over depth hypotheses: non-negative, sums to 1
/// over depth at every valid pixel. Pixels with no valid hypothesis carry a
/// uniform placeholder and mask false.
class ProbabilityVolume {
public:
    ProbabilityVolume() = default;
    ProbabilityVolume(DepthHypotheses hyps, int width, int height);

    int depth_count() const { return hyps_.count(); }
    int width() const { return width_; }
    int height() const { return height_; }
    const DepthHypotheses& hypotheses() const { return hyps_; }

    float& at(int d, int x, int y) { return data_[index(d, x, y)]; }
    float at(int d, int x, int y) const { return data_[index(d, x, y)]; }

    ValidityMask& validity() { return valid_; }
    const ValidityMask& validity() const { return valid_; }
    std::vector<float>& data() { return data_; }
    const std::vector<float>& data() const { return data_; }

private:
    std::size_t index(int d, int x, int y) const {
        return (static_cast<std::size_t>(d) * height_ + y) * width_ + x;
    }

    DepthHypotheses hyps_;
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
    ValidityMask valid_;
};

/// Depth, entropy and log-uncertainty maps for one stage/pair.
struct DepthEstimate {
    ImageF depth;
    ImageF log_uncertainty; // S = log U
    ImageF entropy;         // H
    ValidityMask validity;
};

struct FuParams {
    double a = 2.0;
    double b = -1.0;

    bool operator==(const FuParams&) const = default;
};

/// Stacks group-wise correlations of the reference features against the
/// source features warped to each hypothesis depth.
CostVolume build_pair_volume(const FeatureMap& ref, const FeatureMap& src,
                             const CameraModel& ref_cam, const CameraModel& src_cam,
                             const DepthHypotheses& hyps, int groups = kCorrelationGroups);

/// Fixed regularization standing in for the learned 3D CNN: groups reduced
/// to their mean, then a spatial box filter of radius box_radius per depth
/// slice followed by a triangle filter of radius depth_radius along the
/// depth axis (both truncated and renormalized at borders). Output has one
/// group.
CostVolume regularize_pair(const CostVolume& vol, int box_radius, int depth_radius);

/// Per-pixel softmax over depth of latent/temperature. Invalid
/// (pixel, depth) entries are assigned a large negative cost first; pixels
/// with no valid depth are marked invalid.
ProbabilityVolume to_probability(const CostVolume& latent, double temperature);

/// Depth regression as the expectation over the hypothesis distribution.
ImageF soft_argmax(const ProbabilityVolume& p);

/// Shannon entropy of the per-pixel depth distribution, with probabilities
/// clamped at 1e-12 inside the log.
ImageF entropy_map(const ProbabilityVolume& p);

/// S = a * H/ln(N_d) + b. Monotonicity requires a >= 0.
ImageF log_uncertainty_from_entropy(const ImageF& entropy, int n_hypotheses,
                                    const FuParams& params);

/// Convenience bundle: probability, soft-argmax depth, entropy and S from
/// one latent volume.
DepthEstimate estimate_from_latent(const CostVolume& latent, double temperature,
                                   const FuParams& params);

} // namespace vismvs
