#include "vismvs/camera.hpp"

#include <fstream>
#include <sstream>

namespace vismvs {

void CameraModel::validate() const {
    const Eigen::Matrix3d& k = intrinsics;
    if (k(1, 0) != 0.0 || k(2, 0) != 0.0 || k(2, 1) != 0.0)
        throw std::invalid_argument("CameraModel: intrinsics not upper triangular");
    if (!(k(0, 0) > 0.0) || !(k(1, 1) > 0.0))
        throw std::invalid_argument("CameraModel: non-positive focal length");
    if (std::abs(k(2, 2) - 1.0) > 1e-12)
        throw std::invalid_argument("CameraModel: intrinsics(2,2) must be 1");
    Eigen::Matrix3d rtr = rotation.transpose() * rotation;
    if ((rtr - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("CameraModel: rotation not orthonormal");
    if (width < 1 || height < 1)
        throw std::invalid_argument("CameraModel: width and height must be >= 1");
}

Projection project(const CameraModel& cam, const Eigen::Vector3d& point) {
    Eigen::Vector3d pc = cam.rotation * point + cam.translation;
    if (!(pc.z() > 0.0))
        throw std::domain_error("project: point behind camera");
    Eigen::Vector3d h = cam.intrinsics * pc;
    return {Eigen::Vector2d(h.x() / h.z(), h.y() / h.z()), pc.z()};
}

bool try_project(const CameraModel& cam, const Eigen::Vector3d& point,
                 Projection& out) noexcept {
    Eigen::Vector3d pc = cam.rotation * point + cam.translation;
    if (!(pc.z() > 0.0)) return false;
    Eigen::Vector3d h = cam.intrinsics * pc;
    out.pixel = Eigen::Vector2d(h.x() / h.z(), h.y() / h.z());
    out.depth = pc.z();
    return true;
}

Eigen::Vector3d backproject(const CameraModel& cam, const Eigen::Vector2d& pixel,
                            double depth) {
    if (!(depth > 0.0))
        throw std::domain_error("backproject: depth must be positive");
    Eigen::Vector3d h(pixel.x(), pixel.y(), 1.0);
    Eigen::Vector3d pc = depth * (cam.intrinsics.inverse() * h);
    return cam.rotation.transpose() * (pc - cam.translation);
}

CameraModel scale_camera(const CameraModel& cam, int divisor) {
    if (divisor < 1)
        throw std::invalid_argument("scale_camera: divisor must be >= 1");
    if (cam.width % divisor != 0 || cam.height % divisor != 0)
        throw std::invalid_argument("scale_camera: dimensions not divisible");
    CameraModel out = cam;
    if (divisor == 1) return out;
    const double n = divisor;
    const double off = (n - 1.0) / 2.0;
    out.intrinsics(0, 0) = cam.intrinsics(0, 0) / n;
    out.intrinsics(1, 1) = cam.intrinsics(1, 1) / n;
    out.intrinsics(0, 1) = cam.intrinsics(0, 1) / n;
    out.intrinsics(0, 2) = (cam.intrinsics(0, 2) - off) / n;
    out.intrinsics(1, 2) = (cam.intrinsics(1, 2) - off) / n;
    out.width = cam.width / divisor;
    out.height = cam.height / divisor;
    return out;
}

CameraModel load_camera(const std::filesystem::path& path, bool camera_to_world) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_camera: cannot open " + path.string());
    double v[16];
    for (double& x : v)
        if (!(in >> x))
            throw std::runtime_error("load_camera: truncated file " + path.string());
    int w = 0, h = 0;
    if (!(in >> w >> h))
        throw std::runtime_error("load_camera: missing dimensions in " + path.string());

    CameraModel cam;
    cam.rotation << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
    cam.translation << v[9], v[10], v[11];
    cam.intrinsics << v[12], 0, v[14], 0, v[13], v[15], 0, 0, 1;
    cam.width = w;
    cam.height = h;
    if (camera_to_world) {
        Eigen::Matrix3d r = cam.rotation.transpose();
        cam.translation = -(r * cam.translation);
        cam.rotation = r;
    }
    cam.validate();
    return cam;
}

void save_camera(const std::filesystem::path& path, const CameraModel& cam) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_camera: cannot open " + path.string());
    out.precision(17);
    const Eigen::Matrix3d& r = cam.rotation;
    out << r(0, 0) << ' ' << r(0, 1) << ' ' << r(0, 2) << '\n'
        << r(1, 0) << ' ' << r(1, 1) << ' ' << r(1, 2) << '\n'
        << r(2, 0) << ' ' << r(2, 1) << ' ' << r(2, 2) << '\n';
    out << cam.translation.x() << ' ' << cam.translation.y() << ' '
        << cam.translation.z() << '\n';
    out << cam.intrinsics(0, 0) << ' ' << cam.intrinsics(1, 1) << ' '
        << cam.intrinsics(0, 2) << ' ' << cam.intrinsics(1, 2) << '\n';
    out << cam.width << ' ' << cam.height << '\n';
    if (!out)
        throw std::runtime_error("save_camera: write failed for " + path.string());
}

} // namespace vismvs
