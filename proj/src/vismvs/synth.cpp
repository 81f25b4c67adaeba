#include "vismvs/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vismvs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double lattice_value(std::int64_t x, std::int64_t y, std::int64_t z, std::uint64_t seed) {
    std::uint64_t h = seed;
    h = splitmix64(h ^ static_cast<std::uint64_t>(x) * 0x8da6b343ull);
    h = splitmix64(h ^ static_cast<std::uint64_t>(y) * 0xd8163841ull);
    h = splitmix64(h ^ static_cast<std::uint64_t>(z) * 0xcb1ab31full);
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0); // 53-bit mantissa
}

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

double value_noise3(const Eigen::Vector3d& p, std::uint64_t seed) {
    const double fx = std::floor(p.x()), fy = std::floor(p.y()), fz = std::floor(p.z());
    const auto x0 = static_cast<std::int64_t>(fx);
    const auto y0 = static_cast<std::int64_t>(fy);
    const auto z0 = static_cast<std::int64_t>(fz);
    const double ux = smoothstep(p.x() - fx);
    const double uy = smoothstep(p.y() - fy);
    const double uz = smoothstep(p.z() - fz);
    double acc = 0.0;
    for (int dz = 0; dz <= 1; ++dz) {
        const double wz = dz ? uz : 1.0 - uz;
        for (int dy = 0; dy <= 1; ++dy) {
            const double wy = dy ? uy : 1.0 - uy;
            for (int dx = 0; dx <= 1; ++dx) {
                const double wx = dx ? ux : 1.0 - ux;
                acc += wx * wy * wz * lattice_value(x0 + dx, y0 + dy, z0 + dz, seed);
            }
        }
    }
    return acc;
}

constexpr double kRayEps = 1e-9;

bool intersect_plane(const ScenePlane& plane, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir, double& t) {
    const double denom = plane.normal.dot(dir);
    if (std::abs(denom) < 1e-12) return false;
    const double tt = (plane.offset - plane.normal.dot(origin)) / denom;
    if (tt <= kRayEps) return false;
    t = tt;
    return true;
}

bool intersect_box(const SceneBox& box, const Eigen::Vector3d& origin,
                   const Eigen::Vector3d& dir, double& t) {
    double t_enter = -std::numeric_limits<double>::infinity();
    double t_exit = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        if (std::abs(dir[a]) < 1e-15) {
            if (origin[a] < box.min_corner[a] || origin[a] > box.max_corner[a])
                return false;
            continue;
        }
        double t0 = (box.min_corner[a] - origin[a]) / dir[a];
        double t1 = (box.max_corner[a] - origin[a]) / dir[a];
        if (t0 > t1) std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
    }
    if (t_enter > t_exit || t_enter <= kRayEps) return false;
    t = t_enter;
    return true;
}

} // namespace

RayHit cast_scene_ray(const SyntheticScene& scene, const Eigen::Vector3d& origin,
                      const Eigen::Vector3d& dir) {
    RayHit best;
    int id = 0;
    for (const ScenePlane& plane : scene.planes) {
        double t;
        if (intersect_plane(plane, origin, dir, t) && (!best.hit || t < best.t)) {
            best.hit = true;
            best.t = t;
            best.surface_id = id;
        }
        ++id;
    }
    for (const SceneBox& box : scene.boxes) {
        double t;
        if (intersect_box(box, origin, dir, t) && (!best.hit || t < best.t)) {
            best.hit = true;
            best.t = t;
            best.surface_id = id;
        }
        ++id;
    }
    if (best.hit) best.point = origin + best.t * dir;
    return best;
}

Eigen::Vector3d pixel_ray(const CameraModel& cam, double x, double y) {
    return cam.rotation.transpose() *
           (cam.intrinsics.inverse() * Eigen::Vector3d(x, y, 1.0));
}

double scene_albedo(const SyntheticScene& scene, int surface_id,
                    const Eigen::Vector3d& point) {
    const std::uint64_t seed =
        splitmix64(scene.texture_seed ^ (0x5bd1e995ull * static_cast<std::uint64_t>(surface_id + 1)));
    double acc = 0.0, weight = 0.0;
    double amp = 1.0, freq = scene.noise.frequency;
    for (int o = 0; o < scene.noise.octaves; ++o) {
        acc += amp * value_noise3(point * freq, splitmix64(seed + o));
        weight += amp;
        amp *= scene.noise.persistence;
        freq *= 2.0;
    }
    const double centered = (acc / weight - 0.5) * scene.noise.contrast;
    const double textured = std::clamp(0.5 + centered, 0.0, 1.0);
    return scene.ambient + (1.0 - scene.ambient) * textured;
}

RenderResult render(const SyntheticScene& scene, const CameraModel& cam) {
    const int w = cam.width, h = cam.height;
    RenderResult out{ImageF(w, h), ImageF(w, h), Image<int>(w, h, -1)};
    const Eigen::Vector3d origin = cam.center();
    const double d_max = scene.d_min + 2.0 * scene.delta;
    int misses = 0;

#pragma omp parallel for schedule(static) reduction(+ : misses)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const RayHit hit = cast_scene_ray(scene, origin, pixel_ray(cam, x, y));
            if (!hit.hit || hit.t < scene.d_min || hit.t >= d_max) {
                ++misses;
                continue;
            }
            out.image(x, y) = static_cast<float>(scene_albedo(scene, hit.surface_id, hit.point));
            out.gt_depth(x, y) = static_cast<float>(hit.t);
            out.surface_id(x, y) = hit.surface_id;
        }
    }
    if (misses > 0)
        throw std::runtime_error(
            "render: a ray missed the scene or left the declared depth range");
    return out;
}

ValidityMask visibility_mask(const SyntheticScene& scene, const CameraModel& ref_cam,
                             const CameraModel& src_cam) {
    const int w = ref_cam.width, h = ref_cam.height;
    ValidityMask mask(w, h, 0);
    const Eigen::Vector3d ref_origin = ref_cam.center();
    const Eigen::Vector3d src_origin = src_cam.center();
    const double max_u = src_cam.width - 1;
    const double max_v = src_cam.height - 1;

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const RayHit hit = cast_scene_ray(scene, ref_origin, pixel_ray(ref_cam, x, y));
            if (!hit.hit) continue;
            Projection proj;
            if (!try_project(src_cam, hit.point, proj)) continue;
            if (proj.pixel.x() < 0.0 || proj.pixel.x() > max_u ||
                proj.pixel.y() < 0.0 || proj.pixel.y() > max_v)
                continue;
            const RayHit src_hit = cast_scene_ray(
                scene, src_origin, pixel_ray(src_cam, proj.pixel.x(), proj.pixel.y()));
            if (!src_hit.hit) continue;
            const double tol = 1e-6 * std::max(1.0, proj.depth);
            if (std::abs(src_hit.t - proj.depth) <= tol) mask(x, y) = 1;
        }
    }
    return mask;
}

namespace {

CameraModel look_at_camera(const Eigen::Vector3d& position, const Eigen::Vector3d& target,
                           double focal, int width, int height) {
    const Eigen::Vector3d fwd = (target - position).normalized();
    Eigen::Vector3d right = Eigen::Vector3d(0, 1, 0).cross(fwd).normalized();
    const Eigen::Vector3d down = fwd.cross(right);
    CameraModel cam;
    cam.rotation.row(0) = right;
    cam.rotation.row(1) = down;
    cam.rotation.row(2) = fwd;
    cam.translation = -(cam.rotation * position);
    cam.intrinsics << focal, 0, (width - 1) / 2.0, 0, focal, (height - 1) / 2.0, 0, 0, 1;
    cam.width = width;
    cam.height = height;
    cam.validate();
    return cam;
}

double jitter(std::uint64_t seed, int salt, double amplitude) {
    const double u =
        static_cast<double>(splitmix64(seed ^ static_cast<std::uint64_t>(salt) * 0x9e3779b9ull) >> 11) *
        (1.0 / 9007199254740992.0);
    return (2.0 * u - 1.0) * amplitude;
}

SceneBox make_box(double cx, double cy, double z_front, double half_x, double half_y,
                  double thickness) {
    return SceneBox{Eigen::Vector3d(cx - half_x, cy - half_y, z_front),
                    Eigen::Vector3d(cx + half_x, cy + half_y, z_front + thickness)};
}

std::vector<CameraModel> suite_cameras(double focal, int width, int height,
                                       std::uint64_t seed) {
    std::vector<CameraModel> cams;
    CameraModel ref;
    ref.intrinsics << focal, 0, (width - 1) / 2.0, 0, focal, (height - 1) / 2.0, 0, 0, 1;
    ref.width = width;
    ref.height = height;
    ref.validate();
    cams.push_back(ref);
    const Eigen::Vector3d target(0.0, 0.0, 4.6);
    for (int i = 0; i < 8; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / 8.0 + jitter(seed, 100 + i, 0.05);
        const double radius = 0.62 + jitter(seed, 200 + i, 0.03);
        const Eigen::Vector3d pos(radius * std::cos(angle), radius * std::sin(angle), 0.0);
        cams.push_back(look_at_camera(pos, target, focal, width, height));
    }
    return cams;
}

} // namespace

std::vector<SceneSample> standard_suites(std::uint64_t seed, int width, int height) {
    if (width % 4 != 0 || height % 4 != 0)
        throw std::invalid_argument("standard_suites: dimensions must be divisible by 4");
    const double focal = 1.09375 * width; // 280 at the default 256

    SyntheticScene base;
    base.d_min = 2.0;
    base.delta = 2.0;
    base.texture_seed = splitmix64(seed);
    base.noise = NoiseParams{};
    base.ambient = 0.15;
    base.cameras = suite_cameras(focal, width, height, seed);

    // Gently slanted background plane around z = 5.
    const double slant_x = 0.10 + jitter(seed, 1, 0.02);
    const double slant_y = -0.06 + jitter(seed, 2, 0.02);
    base.planes.push_back(
        ScenePlane{Eigen::Vector3d(slant_x, slant_y, 1.0).normalized(),
                   Eigen::Vector3d(slant_x, slant_y, 1.0).normalized().dot(
                       Eigen::Vector3d(0, 0, 5.0))});

    std::vector<SceneSample> suites;

    SceneSample unocc{"unoccluded", base};
    suites.push_back(std::move(unocc));

    SceneSample single{"single_occluder", base};
    single.scene.boxes.push_back(make_box(-0.35 + jitter(seed, 3, 0.05),
                                          -0.05 + jitter(seed, 4, 0.05), 3.2, 0.45, 0.42,
                                          0.35));
    suites.push_back(std::move(single));

    SceneSample heavy{"heavy_occlusion", base};
    heavy.scene.boxes.push_back(make_box(-0.55 + jitter(seed, 5, 0.04), -0.40, 2.9, 0.40,
                                         0.34, 0.30));
    heavy.scene.boxes.push_back(make_box(0.60 + jitter(seed, 6, 0.04), -0.15, 3.3, 0.38,
                                         0.42, 0.30));
    heavy.scene.boxes.push_back(make_box(-0.05 + jitter(seed, 7, 0.04), 0.52, 3.0, 0.42,
                                         0.30, 0.30));
    heavy.scene.boxes.push_back(make_box(0.10 + jitter(seed, 8, 0.04), -0.62, 3.7, 0.36,
                                         0.30, 0.30));
    heavy.scene.boxes.push_back(make_box(-0.72 + jitter(seed, 9, 0.04), 0.35, 3.9, 0.30,
                                         0.34, 0.30));
    suites.push_back(std::move(heavy));

    return suites;
}

} // namespace vismvs
