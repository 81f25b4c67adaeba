#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vismvs/camera.hpp"
#include "vismvs/image.hpp"

namespace vismvs {

struct NoiseParams {
    double frequency = 2.0;   // lattice cells per world unit at octave 0
    int octaves = 3;
    double persistence = 0.55;
    double contrast = 1.6;
};

/// Infinite plane n . X = offset with the normal facing the cameras.
struct ScenePlane {
    Eigen::Vector3d normal;
    double offset;
};

struct SceneBox {
    Eigen::Vector3d min_corner;
    Eigen::Vector3d max_corner;
};

/// Analytic multi-view test scene: textured planes and axis-aligned boxes
/// with exact ray-cast depth and a view-independent albedo, so
/// photo-consistency holds exactly for mutually visible surface points.
struct SyntheticScene {
    std::vector<ScenePlane> planes;
    std::vector<SceneBox> boxes; // surface ids continue after the planes
    std::vector<CameraModel> cameras; // cameras[0] is the canonical reference
    std::uint64_t texture_seed = 0;
    NoiseParams noise;
    double ambient = 0.15;
    double d_min = 0.0;
    double delta = 0.0; // scene depths stay inside [d_min, d_min + 2*delta)
};

struct RayHit {
    bool hit = false;
    double t = 0.0; // camera-frame depth when the ray comes from pixel_ray
    int surface_id = -1;
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
};

/// Nearest intersection along origin + t * dir, t > 1e-9. Ties resolve to
/// the lower surface id.
RayHit cast_scene_ray(const SyntheticScene& scene, const Eigen::Vector3d& origin,
                      const Eigen::Vector3d& dir);

/// World direction of the ray through a (possibly fractional) pixel; its
/// parameter t equals camera-frame depth.
Eigen::Vector3d pixel_ray(const CameraModel& cam, double x, double y);

/// Procedural value-noise albedo in [0,1]; a pure function of the surface
/// point, never of the viewing ray.
double scene_albedo(const SyntheticScene& scene, int surface_id,
                    const Eigen::Vector3d& point);

struct RenderResult {
    ImageF image;    // [0,1] grayscale
    ImageF gt_depth; // camera-frame z
    Image<int> surface_id;
};

/// Exact per-pixel ray cast. Throws std::runtime_error if any ray misses
/// the scene or a depth falls outside the declared range.
RenderResult render(const SyntheticScene& scene, const CameraModel& cam);

/// True where the reference pixel's 3D point projects in bounds into src
/// and the source ray to that projection hits the same surface point
/// (depth agreement within 1e-6, relative above unit depth).
ValidityMask visibility_mask(const SyntheticScene& scene, const CameraModel& ref_cam,
                             const CameraModel& src_cam);

struct SceneSample {
    std::string name;
    SyntheticScene scene;
};

/// The three desk-scale oracle suites (unoccluded, single_occluder,
/// heavy_occlusion), each with one reference plus eight source cameras.
/// Deterministic for a given seed.
std::vector<SceneSample> standard_suites(std::uint64_t seed, int width = 256,
                                         int height = 192);

} // namespace vismvs
