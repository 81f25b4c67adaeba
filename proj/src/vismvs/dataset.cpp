#include "vismvs/dataset.hpp"

#include <fstream>
#include <sstream>

#include "vismvs/io_pfm.hpp"
#include "vismvs/io_pnm.hpp"

namespace vismvs {

std::string view_id(int index) {
    std::string s = std::to_string(index);
    return s.size() < 2 ? "0" + s : s;
}

int SceneDataset::view_index(const std::string& id) const {
    for (std::size_t i = 0; i < views.size(); ++i)
        if (views[i].id == id) return static_cast<int>(i);
    return -1;
}

ImageF SceneDataset::load_gray(int index) const {
    return load_image_gray(root / views[index].image_file);
}

ImageRGB SceneDataset::load_rgb(int index) const {
    return load_ppm(root / views[index].image_file);
}

ImageF SceneDataset::load_gt_depth(int index) const {
    if (views[index].gt_depth_file.empty())
        throw std::runtime_error("scene has no ground-truth depth for view " +
                                 views[index].id);
    return load_pfm(root / views[index].gt_depth_file);
}

ValidityMask SceneDataset::load_visibility(int ref_index, int src_index) const {
    const std::string name =
        "vis_" + views[ref_index].id + "_" + views[src_index].id + ".pgm";
    return load_pgm(root / name);
}

SceneDataset load_scene_dir(const std::filesystem::path& dir) {
    const std::filesystem::path manifest = dir / "manifest.txt";
    std::ifstream in(manifest);
    if (!in)
        throw std::runtime_error("load_scene_dir: cannot open " + manifest.string());

    SceneDataset ds;
    ds.root = dir;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "vismvs-scene") {
            int version = 0;
            ls >> version;
            if (version != 1)
                throw std::runtime_error("load_scene_dir: unsupported manifest version");
        } else if (word == "seed") {
            ls >> ds.seed;
        } else if (word == "range") {
            ls >> ds.d_min >> ds.delta;
        } else if (word == "view") {
            SceneView v;
            ls >> v.id >> v.image_file >> v.camera_file >> v.gt_depth_file;
            if (v.id.empty() || v.image_file.empty() || v.camera_file.empty())
                throw std::runtime_error("load_scene_dir: malformed view line: " + line);
            if (v.gt_depth_file == "-") v.gt_depth_file.clear();
            v.camera = load_camera(dir / v.camera_file);
            ds.views.push_back(std::move(v));
        }
    }
    if (ds.views.empty())
        throw std::runtime_error("load_scene_dir: no views in " + manifest.string());
    if (!(ds.d_min > 0.0) || !(ds.delta > 0.0))
        throw std::runtime_error("load_scene_dir: missing depth range in manifest");
    return ds;
}

void write_scene_dir(const std::filesystem::path& dir, const SyntheticScene& scene,
                     std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    const int nv = static_cast<int>(scene.cameras.size());

    std::vector<RenderResult> renders;
    renders.reserve(nv);
    for (int i = 0; i < nv; ++i)
        renders.push_back(render(scene, scene.cameras[i]));

    std::ostringstream manifest;
    manifest << "vismvs-scene 1\n";
    manifest << "seed " << seed << "\n";
    manifest.precision(17);
    manifest << "range " << scene.d_min << " " << scene.delta << "\n";
    manifest << "views " << nv << "\n";
    for (int i = 0; i < nv; ++i) {
        const std::string id = view_id(i);
        const std::string image_file = "image_" + id + ".ppm";
        const std::string cam_file = "cam_" + id + ".txt";
        const std::string depth_file = "gt_depth_" + id + ".pfm";
        save_ppm(dir / image_file, gray_to_rgb(renders[i].image));
        save_camera(dir / cam_file, scene.cameras[i]);
        save_pfm(dir / depth_file, renders[i].gt_depth);
        manifest << "view " << id << " " << image_file << " " << cam_file << " "
                 << depth_file << "\n";
    }
    for (int r = 0; r < nv; ++r) {
        for (int s = 0; s < nv; ++s) {
            if (r == s) continue;
            ValidityMask vis = visibility_mask(scene, scene.cameras[r], scene.cameras[s]);
            for (std::size_t i = 0; i < vis.size(); ++i) vis[i] = vis[i] ? 255 : 0;
            save_pgm(dir / ("vis_" + view_id(r) + "_" + view_id(s) + ".pgm"), vis);
        }
    }

    std::ofstream out(dir / "manifest.txt");
    if (!out)
        throw std::runtime_error("write_scene_dir: cannot write manifest in " + dir.string());
    out << manifest.str();
    if (!out)
        throw std::runtime_error("write_scene_dir: manifest write failed in " + dir.string());
}

} // namespace vismvs
