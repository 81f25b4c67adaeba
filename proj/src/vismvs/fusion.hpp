#pragma once

#include <span>
#include <string>

#include "vismvs/cost_volume.hpp"

namespace vismvs {

enum class FusionStrategy { vis_weighted, average, max_pool, variance };

FusionStrategy parse_fusion_strategy(const std::string& name); // vis|var|ave|max
std::string fusion_strategy_name(FusionStrategy s);

/// Multi-view reduction of pair-wise latent volumes.
///   vis_weighted: per-pixel convex combination with weights e^{-S_i},
///     renormalized over the views valid at each (pixel, depth);
///   average: mean over valid views;
///   max_pool: element-wise maximum over valid views;
///   variance: element-wise population variance, valid only where every
///     view is valid.
/// Views are reduced in ascending index order. log_uncertainties is
/// required (one per volume) for vis_weighted and ignored otherwise.
CostVolume fuse_volumes(std::span<const CostVolume> vols,
                        std::span<const ImageF> log_uncertainties,
                        FusionStrategy strategy);

/// Same fixed smoothing as the pair-wise path followed by the softmax.
ProbabilityVolume regularize_fused(const CostVolume& vol, int box_radius,
                                   int depth_radius, double temperature);

} // namespace vismvs
