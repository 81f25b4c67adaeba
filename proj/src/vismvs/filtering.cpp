#include "vismvs/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vismvs {

FilterConfig dtu_filter_preset() {
    return FilterConfig{{0.6, 0.6, 0.6}, 2, 1.0, 0.01};
}

FilterConfig tnt_filter_preset() {
    return FilterConfig{{0.8, 0.7, 0.8}, 4, 1.0, 0.01};
}

ImageF probability_map(const ProbabilityVolume& p, const ImageF& depth) {
    if (depth.width() != p.width() || depth.height() != p.height())
        throw std::invalid_argument("probability_map: shape mismatch");
    const int nd = p.depth_count();
    const std::size_t px = static_cast<std::size_t>(p.width()) * p.height();
    const float* prob = p.data().data();
    ImageF out(p.width(), p.height());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < p.height(); ++y) {
        for (int x = 0; x < p.width(); ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * p.width() + x;
            const float d = depth[i];
            // Fractional index of d in the (strictly increasing) grid.
            int lo = 0;
            while (lo + 2 < nd && p.hypotheses().value(lo + 1, x, y) <= d) ++lo;
            const float d0 = p.hypotheses().value(lo, x, y);
            const float d1 = p.hypotheses().value(lo + 1, x, y);
            double t = lo + (d - d0) / (d1 - d0);
            t = std::clamp(t, 0.0, static_cast<double>(nd - 1));
            const int jlo = std::max(0, static_cast<int>(std::ceil(t - 2.0)));
            const int jhi = std::min(nd - 1, static_cast<int>(std::floor(t + 2.0)));
            double acc = 0.0;
            for (int j = jlo; j <= jhi; ++j)
                acc += prob[static_cast<std::size_t>(j) * px + i];
            out[i] = static_cast<float>(acc);
        }
    }
    return out;
}

ValidityMask photometric_filter(const std::array<ImageF, 3>& stage_prob_maps,
                                const std::array<double, 3>& thresholds) {
    const ImageF& final_map = stage_prob_maps[2];
    for (const ImageF& m : stage_prob_maps)
        if (!m.same_size(final_map))
            throw std::invalid_argument("photometric_filter: stage maps must share resolution");
    ValidityMask mask(final_map.width(), final_map.height(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        bool keep = true;
        for (int k = 0; k < 3; ++k)
            keep = keep && stage_prob_maps[k][i] > thresholds[k];
        mask[i] = keep ? 1 : 0;
    }
    return mask;
}

GeometricConsistency geometric_filter(const ImageF& ref_depth, const ValidityMask& ref_valid,
                                      const CameraModel& ref_cam,
                                      std::span<const ImageF> other_depths,
                                      std::span<const ValidityMask> other_valids,
                                      std::span<const CameraModel> other_cams,
                                      const FilterConfig& config) {
    const int w = ref_depth.width(), h = ref_depth.height();
    if (ref_cam.width != w || ref_cam.height != h)
        throw std::invalid_argument("geometric_filter: camera does not match depth map");
    const std::size_t nv = other_depths.size();
    if (other_valids.size() != nv || other_cams.size() != nv)
        throw std::invalid_argument("geometric_filter: view list mismatch");

    const float nan = std::numeric_limits<float>::quiet_NaN();
    GeometricConsistency geo;
    geo.mask = ValidityMask(w, h, 0);
    geo.count = Image<int>(w, h, 0);
    geo.roundtrip_depth.assign(nv, ImageF(w, h, nan));

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!ref_valid(x, y)) continue;
            const double d = ref_depth(x, y);
            if (!(d > 0.0) || !std::isfinite(d)) continue;
            const Eigen::Vector3d world = backproject(ref_cam, Eigen::Vector2d(x, y), d);
            int n_ok = 0;
            for (std::size_t v = 0; v < nv; ++v) {
                const CameraModel& cam = other_cams[v];
                Projection hit;
                if (!try_project(cam, world, hit)) continue;
                const int sx = static_cast<int>(std::lround(hit.pixel.x()));
                const int sy = static_cast<int>(std::lround(hit.pixel.y()));
                if (sx < 0 || sx >= cam.width || sy < 0 || sy >= cam.height) continue;
                if (!other_valids[v](sx, sy)) continue;
                const double ds = other_depths[v](sx, sy);
                if (!(ds > 0.0) || !std::isfinite(ds)) continue;
                const Eigen::Vector3d back = backproject(cam, Eigen::Vector2d(sx, sy), ds);
                Projection rt;
                if (!try_project(ref_cam, back, rt)) continue;
                const double err_px = (rt.pixel - Eigen::Vector2d(x, y)).norm();
                const double err_d = std::abs(rt.depth - d) / d;
                if (err_px < config.max_reproj_px && err_d < config.max_rel_depth_err) {
                    ++n_ok;
                    geo.roundtrip_depth[v](x, y) = static_cast<float>(rt.depth);
                }
            }
            geo.count(x, y) = n_ok;
            geo.mask(x, y) = n_ok >= config.min_consistent_views ? 1 : 0;
        }
    }
    return geo;
}

ImageF median_fuse(const ImageF& ref_depth, const GeometricConsistency& geo) {
    const int w = ref_depth.width(), h = ref_depth.height();
    ImageF out = ref_depth;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        float vals[65];
        for (int x = 0; x < w; ++x) {
            int n = 0;
            vals[n++] = ref_depth(x, y);
            for (const ImageF& rt : geo.roundtrip_depth) {
                const float v = rt(x, y);
                if (std::isfinite(v) && n < 65) vals[n++] = v;
            }
            std::sort(vals, vals + n);
            out(x, y) = vals[(n - 1) / 2];
        }
    }
    return out;
}

} // namespace vismvs
