#include "vismvs/point_cloud.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vismvs {

PointCloud cloud_from_depth(const ImageF& depth, const ValidityMask& mask,
                            const CameraModel& cam, const ImageRGB& image) {
    if (!depth.same_size(mask) || !depth.same_size(image))
        throw std::invalid_argument("cloud_from_depth: shape mismatch");
    if (cam.width != depth.width() || cam.height != depth.height())
        throw std::invalid_argument("cloud_from_depth: camera does not match depth map");
    PointCloud cloud;
    for (int y = 0; y < depth.height(); ++y) {
        for (int x = 0; x < depth.width(); ++x) {
            if (!mask(x, y)) continue;
            const double d = depth(x, y);
            if (!(d > 0.0) || !std::isfinite(d)) continue;
            const Eigen::Vector3d p = backproject(cam, Eigen::Vector2d(x, y), d);
            cloud.points.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()),
                                    static_cast<float>(p.z())});
            cloud.colors.push_back(image(x, y));
        }
    }
    return cloud;
}

void save_ply(const std::filesystem::path& path, const PointCloud& cloud) {
    if (cloud.points.size() != cloud.colors.size())
        throw std::invalid_argument("save_ply: point/color count mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("save_ply: cannot open " + path.string());
    out << "ply\n"
        << "format binary_little_endian 1.0\n"
        << "element vertex " << cloud.points.size() << "\n"
        << "property float x\n"
        << "property float y\n"
        << "property float z\n"
        << "property uchar red\n"
        << "property uchar green\n"
        << "property uchar blue\n"
        << "end_header\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        out.write(reinterpret_cast<const char*>(cloud.points[i].data()), 12);
        out.write(reinterpret_cast<const char*>(cloud.colors[i].data()), 3);
    }
    if (!out)
        throw std::runtime_error("save_ply: write failed for " + path.string());
}

PointCloud load_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_ply: cannot open " + path.string());
    std::string line;
    std::size_t count = 0;
    bool header_done = false;
    std::getline(in, line);
    if (line != "ply")
        throw std::runtime_error("load_ply: not a PLY file: " + path.string());
    while (std::getline(in, line)) {
        if (line == "end_header") {
            header_done = true;
            break;
        }
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt != "binary_little_endian")
                throw std::runtime_error("load_ply: unsupported format in " + path.string());
        } else if (word == "element") {
            std::string what;
            ls >> what >> count;
            if (what != "vertex")
                throw std::runtime_error("load_ply: unsupported element in " + path.string());
        }
    }
    if (!header_done)
        throw std::runtime_error("load_ply: missing end_header in " + path.string());
    PointCloud cloud;
    cloud.points.resize(count);
    cloud.colors.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(cloud.points[i].data()), 12);
        in.read(reinterpret_cast<char*>(cloud.colors[i].data()), 3);
    }
    if (!in)
        throw std::runtime_error("load_ply: truncated vertex data in " + path.string());
    return cloud;
}

} // namespace vismvs
