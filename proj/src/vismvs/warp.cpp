#include "vismvs/warp.hpp"

#include <cmath>
#include <stdexcept>

namespace vismvs {

namespace {

struct WarpTransform {
    // Homogeneous source coordinates of a reference pixel p at depth d are
    // d * A * (x, y, 1) + b; the third component is the source-frame depth.
    Eigen::Matrix3d a;
    Eigen::Vector3d b;
};

WarpTransform make_transform(const CameraModel& ref_cam, const CameraModel& src_cam) {
    Eigen::Matrix3d rel = src_cam.rotation * ref_cam.rotation.transpose();
    WarpTransform t;
    t.a = src_cam.intrinsics * rel * ref_cam.intrinsics.inverse();
    t.b = src_cam.intrinsics * (src_cam.translation - rel * ref_cam.translation);
    return t;
}

void check_dimensions(const FeatureMap& src_map, const CameraModel& ref_cam,
                      const CameraModel& src_cam) {
    if (src_cam.width != src_map.width() || src_cam.height != src_map.height())
        throw std::invalid_argument("warp_to_reference: source camera does not match feature map");
    if (ref_cam.width < 1 || ref_cam.height < 1)
        throw std::invalid_argument("warp_to_reference: empty reference camera");
}

inline void sample_pixel(const FeatureMap& src_map, double u, double v,
                         float* out, int channels) {
    const int w = src_map.width(), h = src_map.height();
    int x0 = static_cast<int>(u);
    int y0 = static_cast<int>(v);
    int x1 = x0 + 1 < w ? x0 + 1 : w - 1;
    int y1 = y0 + 1 < h ? y0 + 1 : h - 1;
    const float dx = static_cast<float>(u - x0);
    const float dy = static_cast<float>(v - y0);
    const float w00 = (1.0f - dx) * (1.0f - dy);
    const float w10 = dx * (1.0f - dy);
    const float w01 = (1.0f - dx) * dy;
    const float w11 = dx * dy;
    const float* p00 = src_map.pixel(x0, y0);
    const float* p10 = src_map.pixel(x1, y0);
    const float* p01 = src_map.pixel(x0, y1);
    const float* p11 = src_map.pixel(x1, y1);
    for (int c = 0; c < channels; ++c)
        out[c] = w00 * p00[c] + w10 * p10[c] + w01 * p01[c] + w11 * p11[c];
}

template <typename DepthAt>
WarpedFeatures warp_impl(const FeatureMap& src_map, const CameraModel& ref_cam,
                         const CameraModel& src_cam, DepthAt depth_at) {
    const int w = ref_cam.width, h = ref_cam.height;
    const int channels = src_map.channels();
    const WarpTransform t = make_transform(ref_cam, src_cam);
    const double max_u = src_cam.width - 1;
    const double max_v = src_cam.height - 1;

    WarpedFeatures out{FeatureMap(w, h, channels, src_map.scale()), ValidityMask(w, h, 0)};
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double d = depth_at(x, y);
            Eigen::Vector3d q = d * (t.a * Eigen::Vector3d(x, y, 1.0)) + t.b;
            if (!(q.z() > 0.0)) continue;
            const double u = q.x() / q.z();
            const double v = q.y() / q.z();
            if (u < 0.0 || u > max_u || v < 0.0 || v > max_v) continue;
            out.mask(x, y) = 1;
            sample_pixel(src_map, u, v, out.features.pixel(x, y), channels);
        }
    }
    return out;
}

} // namespace

WarpedFeatures warp_to_reference(const FeatureMap& src_map, const CameraModel& ref_cam,
                                 const CameraModel& src_cam, double plane_depth) {
    check_dimensions(src_map, ref_cam, src_cam);
    if (!(plane_depth > 0.0))
        throw std::domain_error("warp_to_reference: non-positive depth");
    return warp_impl(src_map, ref_cam, src_cam, [=](int, int) { return plane_depth; });
}

WarpedFeatures warp_to_reference(const FeatureMap& src_map, const CameraModel& ref_cam,
                                 const CameraModel& src_cam, const ImageF& depth) {
    check_dimensions(src_map, ref_cam, src_cam);
    if (depth.width() != ref_cam.width || depth.height() != ref_cam.height)
        throw std::invalid_argument("warp_to_reference: depth map does not match reference camera");
    for (std::size_t i = 0; i < depth.size(); ++i)
        if (!(depth[i] > 0.0f))
            throw std::domain_error("warp_to_reference: non-positive depth");
    return warp_impl(src_map, ref_cam, src_cam,
                     [&](int x, int y) { return static_cast<double>(depth(x, y)); });
}

} // namespace vismvs
