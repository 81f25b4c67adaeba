#pragma once

#include "vismvs/camera.hpp"
#include "vismvs/features.hpp"
#include "vismvs/image.hpp"

namespace vismvs {

struct WarpedFeatures {
    FeatureMap features;
    ValidityMask mask;
};

/// Plane-sweep reprojection: every reference pixel is backprojected at its
/// depth, projected into the source camera and sampled bilinearly from
/// src_map. Samples falling outside [0, W-1] x [0, H-1] (or behind the
/// source camera) get value 0 and mask false. Cameras must match the feature
/// map resolution.
WarpedFeatures warp_to_reference(const FeatureMap& src_map, const CameraModel& ref_cam,
                                 const CameraModel& src_cam, double plane_depth);

/// Same, with one depth per reference pixel.
WarpedFeatures warp_to_reference(const FeatureMap& src_map, const CameraModel& ref_cam,
                                 const CameraModel& src_cam, const ImageF& depth);

} // namespace vismvs
