#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vismvs/camera.hpp"
#include "vismvs/image.hpp"
#include "vismvs/synth.hpp"

namespace vismvs {

struct SceneView {
    std::string id; // zero-padded index, e.g. "00"
    CameraModel camera;
    std::string image_file;
    std::string camera_file;
    std::string gt_depth_file; // may be empty for real captures
};

/// A scene directory as described by its manifest.txt.
struct SceneDataset {
    std::filesystem::path root;
    double d_min = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::vector<SceneView> views;

    int view_index(const std::string& id) const; // -1 if absent
    ImageF load_gray(int index) const;
    ImageRGB load_rgb(int index) const;
    ImageF load_gt_depth(int index) const;
    ValidityMask load_visibility(int ref_index, int src_index) const;
};

SceneDataset load_scene_dir(const std::filesystem::path& dir);

/// Renders every camera of the scene and writes the directory in the
/// pipeline's native formats: image_XX.ppm, cam_XX.txt, gt_depth_XX.pfm,
/// vis_XX_YY.pgm for every ordered camera pair, plus manifest.txt.
void write_scene_dir(const std::filesystem::path& dir, const SyntheticScene& scene,
                     std::uint64_t seed);

std::string view_id(int index);

} // namespace vismvs
