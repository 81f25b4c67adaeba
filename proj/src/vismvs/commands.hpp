#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vismvs/cascade.hpp"
#include "vismvs/config.hpp"
#include "vismvs/dataset.hpp"

namespace vismvs {

struct SynthOptions {
    std::filesystem::path out_dir;
    std::uint64_t seed = 1;
    int width = 256;
    int height = 192;
};

/// Writes the three oracle suites plus a top-level manifest listing them.
int cmd_synth(const SynthOptions& opt);

struct DepthOptions {
    std::filesystem::path scene_dir;
    std::string ref_id = "00";
    std::filesystem::path out_dir;
    std::vector<std::string> source_ids; // empty: first n_views other views
    PipelineConfig config;
    bool dump_volumes = false;
};

/// Runs the cascade for one reference view; writes the final depth map,
/// validity mask, final and per-pair log-uncertainty maps and the
/// per-stage probability maps.
int cmd_depth(const DepthOptions& opt);

struct ReconstructOptions {
    std::filesystem::path scene_dir;
    std::filesystem::path out_ply;
    PipelineConfig config;
};

/// Depth for every view, photometric + geometric filtering, median depth
/// fusion and a merged binary PLY point cloud.
int cmd_reconstruct(const ReconstructOptions& opt);

struct EvalOptions {
    std::filesystem::path outputs_dir;
    std::filesystem::path gt_dir; // a scene directory with gt_depth_XX.pfm
    std::filesystem::path csv_path; // empty: outputs_dir/metrics.csv
    PipelineConfig config;
};

/// Compares every depth_XX.pfm in outputs_dir against the ground truth;
/// emits the metrics CSV and a summary. Nonzero exit if any sample failed.
int cmd_eval(const EvalOptions& opt);

struct AblateOptions {
    std::filesystem::path scene_dir;
    std::string ref_id = "00";
    std::filesystem::path out_csv;
    PipelineConfig config;
};

/// Depth across all four fusion strategies x N_v in {2..8}, one CSV row
/// per run.
int cmd_ablate(const AblateOptions& opt);

/// Shared pipeline entry used by the commands: resolves the depth range
/// (config overrides the scene manifest when positive) and runs the
/// cascade for one reference view.
struct DepthRun {
    std::vector<StageResult> stages;
    std::vector<int> src_indices;
    CascadeConfig cascade; // with the resolved range
};

DepthRun run_depth_pipeline(const SceneDataset& scene, int ref_index,
                            std::span<const int> src_indices, const PipelineConfig& config);

/// The first n_views views other than the reference, in manifest order.
std::vector<int> default_source_indices(const SceneDataset& scene, int ref_index,
                                        int n_views);

} // namespace vismvs
