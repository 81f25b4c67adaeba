#pragma once

#include <Eigen/Dense>
#include <filesystem>

namespace vismvs {

/// Pinhole camera. Pose is world-to-camera: x_cam = R * x_world + t.
/// Intrinsics are upper triangular with K(2,2) = 1; pixel centers at
/// integer coordinates.
struct CameraModel {
    Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
    int width = 0;
    int height = 0;

    /// Throws std::invalid_argument on a malformed model.
    void validate() const;

    /// Camera center in world coordinates: -R^T t.
    Eigen::Vector3d center() const { return -rotation.transpose() * translation; }
};

struct Projection {
    Eigen::Vector2d pixel;
    double depth; // z in the camera frame
};

/// Perspective projection of a world point. Throws std::domain_error if the
/// point lies behind the camera (camera-frame z <= 0).
Projection project(const CameraModel& cam, const Eigen::Vector3d& point);

/// Non-throwing projection for hot loops; returns false behind the camera.
bool try_project(const CameraModel& cam, const Eigen::Vector3d& point,
                 Projection& out) noexcept;

/// Inverse of project: lifts a pixel at the given camera-frame depth back to
/// world coordinates. Throws std::domain_error for depth <= 0.
Eigen::Vector3d backproject(const CameraModel& cam, const Eigen::Vector2d& pixel,
                            double depth);

/// Camera for the image downsampled by an integer factor with 2x2 (or n x n)
/// area averaging: new pixel j covers original pixels [n j, n j + n - 1], so
/// its center sits at original coordinate n j + (n-1)/2.
CameraModel scale_camera(const CameraModel& cam, int divisor);

/// Text format: 18 whitespace-separated numbers -- 9 rotation (row-major),
/// 3 translation, fx fy cx cy, width height. With camera_to_world = true the
/// stored pose is interpreted as camera-to-world and inverted on load.
CameraModel load_camera(const std::filesystem::path& path, bool camera_to_world = false);
void save_camera(const std::filesystem::path& path, const CameraModel& cam);

} // namespace vismvs
