#include "vismvs/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vismvs/filtering.hpp"
#include "vismvs/io_pfm.hpp"
#include "vismvs/io_pnm.hpp"
#include "vismvs/io_volume.hpp"
#include "vismvs/losses.hpp"
#include "vismvs/parallel.hpp"
#include "vismvs/point_cloud.hpp"

namespace vismvs {

namespace {

ValidityMask to_binary_mask(const ValidityMask& m) {
    ValidityMask out = m;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] ? 255 : 0;
    return out;
}

ImageF upsample_to(const ImageF& map, int width, int height) {
    ImageF out = map;
    while (out.width() < width || out.height() < height) out = upsample_depth(out);
    if (out.width() != width || out.height() != height)
        throw std::invalid_argument("upsample_to: resolutions are not power-of-two related");
    return out;
}

} // namespace

std::vector<int> default_source_indices(const SceneDataset& scene, int ref_index,
                                        int n_views) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(scene.views.size()) &&
                    static_cast<int>(out.size()) < n_views;
         ++i)
        if (i != ref_index) out.push_back(i);
    if (out.empty())
        throw std::invalid_argument("scene has no source views");
    return out;
}

DepthRun run_depth_pipeline(const SceneDataset& scene, int ref_index,
                            std::span<const int> src_indices, const PipelineConfig& config) {
    if (ref_index < 0 || ref_index >= static_cast<int>(scene.views.size()))
        throw std::invalid_argument("reference view out of range");
    if (src_indices.empty())
        throw std::invalid_argument("need at least one source view");

    DepthRun run;
    run.cascade = config.cascade;
    if (!(run.cascade.d_min > 0.0) || !(run.cascade.delta > 0.0)) {
        run.cascade.d_min = scene.d_min;
        run.cascade.delta = scene.delta;
    }
    run.src_indices.assign(src_indices.begin(), src_indices.end());

    const ImageF ref_image = scene.load_gray(ref_index);
    std::vector<ImageF> src_images;
    std::vector<CameraModel> src_cams;
    for (int i : run.src_indices) {
        if (i < 0 || i >= static_cast<int>(scene.views.size()))
            throw std::invalid_argument("source view out of range");
        src_images.push_back(scene.load_gray(i));
        src_cams.push_back(scene.views[i].camera);
    }
    run.stages = infer_depth(ref_image, scene.views[ref_index].camera, src_images,
                             src_cams, run.cascade);
    return run;
}

int cmd_synth(const SynthOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    if (!std::filesystem::is_directory(opt.out_dir))
        throw std::runtime_error("cmd_synth: cannot create " + opt.out_dir.string());

    const std::vector<SceneSample> suites = standard_suites(opt.seed, opt.width, opt.height);
    std::ostringstream manifest;
    manifest << "vismvs-suites 1\n";
    manifest << "seed " << opt.seed << "\n";
    for (const SceneSample& s : suites) {
        write_scene_dir(opt.out_dir / s.name, s.scene, opt.seed);
        manifest << "sample " << s.name << " views "
                 << s.scene.cameras.size() << "\n";
        std::cout << "wrote " << (opt.out_dir / s.name).string() << " ("
                  << s.scene.cameras.size() << " views)\n";
    }
    std::ofstream out(opt.out_dir / "manifest.txt");
    if (!out)
        throw std::runtime_error("cmd_synth: cannot write suite manifest");
    out << manifest.str();
    if (!out)
        throw std::runtime_error("cmd_synth: manifest write failed");
    return 0;
}

int cmd_depth(const DepthOptions& opt) {
    set_job_limit(opt.config.jobs);
    const SceneDataset scene = load_scene_dir(opt.scene_dir);
    const int ref = scene.view_index(opt.ref_id);
    if (ref < 0)
        throw std::invalid_argument("cmd_depth: no view with id " + opt.ref_id);

    std::vector<int> sources;
    if (opt.source_ids.empty()) {
        sources = default_source_indices(scene, ref, opt.config.n_views);
    } else {
        for (const std::string& id : opt.source_ids) {
            const int i = scene.view_index(id);
            if (i < 0)
                throw std::invalid_argument("cmd_depth: no view with id " + id);
            sources.push_back(i);
        }
    }

    const DepthRun run = run_depth_pipeline(scene, ref, sources, opt.config);
    const StageResult& final_stage = run.stages.back();

    std::filesystem::create_directories(opt.out_dir);
    const std::string id = scene.views[ref].id;
    save_pfm(opt.out_dir / ("depth_" + id + ".pfm"), final_stage.final_estimate.depth);
    save_pgm(opt.out_dir / ("mask_" + id + ".pgm"),
             to_binary_mask(final_stage.final_estimate.validity));
    save_pfm(opt.out_dir / ("uncertainty_" + id + ".pfm"),
             final_stage.final_estimate.log_uncertainty);
    for (std::size_t i = 0; i < run.src_indices.size(); ++i)
        save_pfm(opt.out_dir / ("uncertainty_" + id + "_p" +
                                scene.views[run.src_indices[i]].id + ".pfm"),
                 final_stage.pair_estimates[i].log_uncertainty);
    for (int k = 0; k < 3; ++k)
        save_pfm(opt.out_dir / ("prob_" + id + "_s" + std::to_string(k + 1) + ".pfm"),
                 run.stages[k].probability_map);
    if (opt.dump_volumes)
        dump_probability_volume(opt.out_dir / ("volume_" + id + "_s3.pvol"),
                                final_stage.fused_probability);
    return 0;
}

int cmd_reconstruct(const ReconstructOptions& opt) {
    set_job_limit(opt.config.jobs);
    const SceneDataset scene = load_scene_dir(opt.scene_dir);
    const int nv = static_cast<int>(scene.views.size());
    if (nv < 2)
        throw std::invalid_argument("cmd_reconstruct: need at least two views");

    std::vector<ImageF> depths(nv);
    std::vector<ValidityMask> validities(nv);
    std::vector<ValidityMask> photo_masks(nv);
    std::vector<CameraModel> cams(nv);

    for (int v = 0; v < nv; ++v) {
        const std::vector<int> sources =
            default_source_indices(scene, v, opt.config.n_views);
        const DepthRun run = run_depth_pipeline(scene, v, sources, opt.config);
        const StageResult& last = run.stages.back();
        const int w = last.final_estimate.depth.width();
        const int h = last.final_estimate.depth.height();
        const std::array<ImageF, 3> prob_maps = {
            upsample_to(run.stages[0].probability_map, w, h),
            upsample_to(run.stages[1].probability_map, w, h),
            upsample_to(run.stages[2].probability_map, w, h),
        };
        photo_masks[v] = photometric_filter(prob_maps, opt.config.filter.prob_thresholds);
        depths[v] = last.final_estimate.depth;
        validities[v] = last.final_estimate.validity;
        cams[v] = scene.views[v].camera;
    }

    PointCloud cloud;
    for (int v = 0; v < nv; ++v) {
        std::vector<ImageF> other_depths;
        std::vector<ValidityMask> other_valids;
        std::vector<CameraModel> other_cams;
        for (int o = 0; o < nv; ++o) {
            if (o == v) continue;
            other_depths.push_back(depths[o]);
            other_valids.push_back(validities[o]);
            other_cams.push_back(cams[o]);
        }
        const GeometricConsistency geo = geometric_filter(
            depths[v], validities[v], cams[v], other_depths, other_valids, other_cams,
            opt.config.filter);
        const ImageF refined = median_fuse(depths[v], geo);

        ValidityMask keep(depths[v].width(), depths[v].height(), 0);
        for (std::size_t i = 0; i < keep.size(); ++i)
            keep[i] = (validities[v][i] && photo_masks[v][i] && geo.mask[i]) ? 1 : 0;

        const PointCloud part =
            cloud_from_depth(refined, keep, cams[v], scene.load_rgb(v));
        cloud.points.insert(cloud.points.end(), part.points.begin(), part.points.end());
        cloud.colors.insert(cloud.colors.end(), part.colors.begin(), part.colors.end());
    }

    if (opt.out_ply.has_parent_path())
        std::filesystem::create_directories(opt.out_ply.parent_path());
    save_ply(opt.out_ply, cloud);
    std::cout << "wrote " << opt.out_ply.string() << " (" << cloud.points.size()
              << " points)\n";
    return 0;
}

int cmd_eval(const EvalOptions& opt) {
    const SceneDataset gt_scene = load_scene_dir(opt.gt_dir);
    CascadeConfig cascade = opt.config.cascade;
    if (!(cascade.d_min > 0.0) || !(cascade.delta > 0.0)) {
        cascade.d_min = gt_scene.d_min;
        cascade.delta = gt_scene.delta;
    }
    const double interval = final_stage_interval(cascade);
    const std::string scene_name = gt_scene.root.filename().string();
    const std::string strategy = fusion_strategy_name(opt.config.cascade.strategy);

    std::vector<std::filesystem::path> depth_files;
    for (const auto& entry : std::filesystem::directory_iterator(opt.outputs_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("depth_", 0) == 0 && entry.path().extension() == ".pfm")
            depth_files.push_back(entry.path());
    }
    std::sort(depth_files.begin(), depth_files.end());
    if (depth_files.empty())
        throw std::runtime_error("cmd_eval: no depth_*.pfm files in " +
                                 opt.outputs_dir.string());

    std::vector<MetricsRow> rows;
    int failures = 0;
    for (const std::filesystem::path& path : depth_files) {
        const std::string stem = path.stem().string(); // depth_XX
        const std::string id = stem.substr(6);
        try {
            const int vi = gt_scene.view_index(id);
            if (vi < 0)
                throw std::runtime_error("no ground-truth view " + id + " (expected " +
                                         (opt.gt_dir / ("gt_depth_" + id + ".pfm")).string() +
                                         ")");
            const ImageF depth = load_pfm(path);
            const ImageF gt = gt_scene.load_gt_depth(vi);
            if (!depth.same_size(gt))
                throw std::runtime_error("shape mismatch: " + path.string() + " is " +
                                         std::to_string(depth.width()) + "x" +
                                         std::to_string(depth.height()) + ", gt is " +
                                         std::to_string(gt.width()) + "x" +
                                         std::to_string(gt.height()));
            ValidityMask mask(depth.width(), depth.height(), 1);
            const std::filesystem::path mask_path = opt.outputs_dir / ("mask_" + id + ".pgm");
            if (std::filesystem::exists(mask_path)) mask = load_pgm(mask_path);

            const AccuracyMetrics m = accuracy_metrics(depth, gt, mask, interval);
            double loss = m.mean_abs_error;
            const std::filesystem::path unc_path =
                opt.outputs_dir / ("uncertainty_" + id + ".pfm");
            if (std::filesystem::exists(unc_path))
                loss = joint_loss(depth, load_pfm(unc_path), gt, mask, interval);
            rows.push_back(MetricsRow{scene_name + "/" + id, 3, strategy, loss, m.pct_lt1,
                                      m.pct_lt3, m.mean_abs_error});
        } catch (const std::exception& e) {
            std::cerr << "eval error for " << path.string() << ": " << e.what() << "\n";
            rows.push_back(MetricsRow{scene_name + "/" + id + " (error)", 3, strategy,
                                      -1.0, -1.0, -1.0, -1.0});
            ++failures;
        }
    }

    const std::filesystem::path csv =
        opt.csv_path.empty() ? opt.outputs_dir / "metrics.csv" : opt.csv_path;
    write_metrics_csv(csv, rows);
    for (const MetricsRow& r : rows) {
        std::ostringstream line;
        line.precision(4);
        line << std::fixed << r.scene << "  stage " << r.stage << "  " << r.strategy
             << "  loss " << r.loss << "  <1 " << r.pct_lt1 << "%  <3 " << r.pct_lt3
             << "%  mae " << r.mae;
        std::cout << line.str() << "\n";
    }
    std::cout << "wrote " << csv.string() << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_ablate(const AblateOptions& opt) {
    set_job_limit(opt.config.jobs);
    const SceneDataset scene = load_scene_dir(opt.scene_dir);
    const int ref = scene.view_index(opt.ref_id);
    if (ref < 0)
        throw std::invalid_argument("cmd_ablate: no view with id " + opt.ref_id);
    const ImageF gt = scene.load_gt_depth(ref);
    const std::string scene_name = scene.root.filename().string();

    const int max_sources =
        std::min(8, static_cast<int>(scene.views.size()) - 1);
    const FusionStrategy strategies[4] = {FusionStrategy::vis_weighted,
                                          FusionStrategy::variance,
                                          FusionStrategy::average,
                                          FusionStrategy::max_pool};

    std::ostringstream csv;
    csv << "scene,stage,strategy,n_views,loss,pct_lt1,pct_lt3,mae\n";
    csv.precision(10);
    for (int nv = 2; nv <= max_sources; ++nv) {
        const std::vector<int> sources = default_source_indices(scene, ref, nv);
        for (const FusionStrategy strategy : strategies) {
            PipelineConfig cfg = opt.config;
            cfg.cascade.strategy = strategy;
            cfg.n_views = nv;
            const DepthRun run = run_depth_pipeline(scene, ref, sources, cfg);
            const StageResult& last = run.stages.back();
            const double interval = final_stage_interval(run.cascade);
            const AccuracyMetrics m =
                accuracy_metrics(last.final_estimate.depth, gt,
                                 last.final_estimate.validity, interval);
            const double loss =
                joint_loss(last.final_estimate.depth, last.final_estimate.log_uncertainty,
                           gt, last.final_estimate.validity, interval);
            csv << scene_name << ",3," << fusion_strategy_name(strategy) << "," << nv
                << "," << loss << "," << m.pct_lt1 << "," << m.pct_lt3 << ","
                << m.mean_abs_error << "\n";
            std::cout << scene_name << " " << fusion_strategy_name(strategy) << " N_v="
                      << nv << ": <1 " << m.pct_lt1 << "%\n";
        }
    }

    if (opt.out_csv.has_parent_path())
        std::filesystem::create_directories(opt.out_csv.parent_path());
    std::ofstream out(opt.out_csv);
    if (!out)
        throw std::runtime_error("cmd_ablate: cannot open " + opt.out_csv.string());
    out << csv.str();
    if (!out)
        throw std::runtime_error("cmd_ablate: write failed for " + opt.out_csv.string());
    return 0;
}

} // namespace vismvs
