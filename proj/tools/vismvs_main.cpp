#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vismvs/commands.hpp"
#include "vismvs/config.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string fusion;
    int n_views = -1;
    int jobs = -1;
    double temperature = -1.0;
    std::string preset;
};

void add_common_flags(CLI::App* app, CommonFlags& flags) {
    app->add_option("--config", flags.config_path, "pipeline config file (key = value)");
    app->add_option("--fusion", flags.fusion, "fusion strategy: vis|var|ave|max");
    app->add_option("--n-views", flags.n_views, "number of source views");
    app->add_option("--jobs", flags.jobs, "worker thread limit (0 = all cores)");
    app->add_option("--temperature", flags.temperature,
                    "softmax temperature for all stages");
    app->add_option("--preset", flags.preset, "filter preset: dtu|tnt");
}

vismvs::PipelineConfig resolve_config(const CommonFlags& flags) {
    vismvs::PipelineConfig cfg = flags.config_path.empty()
                                     ? vismvs::default_pipeline_config()
                                     : vismvs::load_pipeline_config(flags.config_path);
    if (!flags.fusion.empty())
        cfg.cascade.strategy = vismvs::parse_fusion_strategy(flags.fusion);
    if (flags.n_views > 0) cfg.n_views = flags.n_views;
    if (flags.jobs >= 0) cfg.jobs = flags.jobs;
    if (flags.temperature > 0.0)
        for (auto& stage : cfg.cascade.stages) stage.temperature = flags.temperature;
    if (flags.preset == "dtu") cfg.filter = vismvs::dtu_filter_preset();
    else if (flags.preset == "tnt") cfg.filter = vismvs::tnt_filter_preset();
    else if (!flags.preset.empty())
        throw std::invalid_argument("unknown preset: " + flags.preset);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vismvs: visibility-aware multi-view plane-sweep stereo"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate the synthetic oracle suites");
    vismvs::SynthOptions synth_opt;
    std::string synth_out;
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", synth_opt.seed, "generator seed");
    synth->add_option("--width", synth_opt.width, "image width (divisible by 4)");
    synth->add_option("--height", synth_opt.height, "image height (divisible by 4)");

    // depth
    auto* depth = app.add_subcommand("depth", "depth map for one reference view");
    std::string depth_scene, depth_out, depth_ref = "00", depth_sources;
    bool depth_dump = false;
    CommonFlags depth_flags;
    depth->add_option("--scene", depth_scene, "scene directory")->required();
    depth->add_option("--ref", depth_ref, "reference view id");
    depth->add_option("--out", depth_out, "output directory")->required();
    depth->add_option("--sources", depth_sources, "comma-separated source view ids");
    depth->add_flag("--dump-volumes", depth_dump, "dump the stage-3 probability volume");
    add_common_flags(depth, depth_flags);

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "full point-cloud reconstruction");
    std::string rec_scene, rec_out;
    CommonFlags rec_flags;
    rec->add_option("--scene", rec_scene, "scene directory")->required();
    rec->add_option("--out", rec_out, "output PLY path")->required();
    add_common_flags(rec, rec_flags);

    // eval
    auto* eval = app.add_subcommand("eval", "compare depth outputs against ground truth");
    std::string eval_outputs, eval_gt, eval_csv;
    CommonFlags eval_flags;
    eval->add_option("--outputs", eval_outputs, "directory with depth_XX.pfm")->required();
    eval->add_option("--gt", eval_gt, "scene directory with ground truth")->required();
    eval->add_option("--csv", eval_csv, "metrics CSV path");
    add_common_flags(eval, eval_flags);

    // ablate
    auto* ablate = app.add_subcommand(
        "ablate", "depth across all fusion strategies and view counts");
    std::string ab_scene, ab_csv, ab_ref = "00";
    CommonFlags ab_flags;
    ablate->add_option("--scene", ab_scene, "scene directory")->required();
    ablate->add_option("--ref", ab_ref, "reference view id");
    ablate->add_option("--csv", ab_csv, "output CSV path")->required();
    add_common_flags(ablate, ab_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            synth_opt.out_dir = synth_out;
            return vismvs::cmd_synth(synth_opt);
        }
        if (depth->parsed()) {
            vismvs::DepthOptions opt;
            opt.scene_dir = depth_scene;
            opt.ref_id = depth_ref;
            opt.out_dir = depth_out;
            opt.dump_volumes = depth_dump;
            opt.config = resolve_config(depth_flags);
            if (!depth_sources.empty()) {
                std::string token;
                std::istringstream ss(depth_sources);
                while (std::getline(ss, token, ','))
                    if (!token.empty()) opt.source_ids.push_back(token);
            }
            return vismvs::cmd_depth(opt);
        }
        if (rec->parsed()) {
            vismvs::ReconstructOptions opt;
            opt.scene_dir = rec_scene;
            opt.out_ply = rec_out;
            opt.config = resolve_config(rec_flags);
            return vismvs::cmd_reconstruct(opt);
        }
        if (eval->parsed()) {
            vismvs::EvalOptions opt;
            opt.outputs_dir = eval_outputs;
            opt.gt_dir = eval_gt;
            if (!eval_csv.empty()) opt.csv_path = eval_csv;
            opt.config = resolve_config(eval_flags);
            return vismvs::cmd_eval(opt);
        }
        if (ablate->parsed()) {
            vismvs::AblateOptions opt;
            opt.scene_dir = ab_scene;
            opt.ref_id = ab_ref;
            opt.out_csv = ab_csv;
            opt.config = resolve_config(ab_flags);
            return vismvs::cmd_ablate(opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
