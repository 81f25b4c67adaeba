#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vismvs/cost_volume.hpp"
#include "vismvs/image.hpp"

namespace vismvs {

/// Mean over valid pixels of |D - gt| / interval.
double l1_loss(const ImageF& depth, const ImageF& gt, const ValidityMask& valid,
               double interval);

/// Joint negative log likelihood under a Laplacian error model: mean over
/// valid pixels of e^{-S} * |D - gt| / interval + S (constants dropped).
double joint_loss(const ImageF& depth, const ImageF& log_unc, const ImageF& gt,
                  const ValidityMask& valid, double interval);

struct StageLosses {
    double final_l1 = 0.0;
    std::vector<double> pair_l1;
    std::vector<double> pair_joint;
};

struct LossReport {
    std::array<StageLosses, 3> stages;
    std::array<double, 3> lambdas = {0.5, 1.0, 2.0};
    std::array<std::size_t, 3> valid_counts = {0, 0, 0};
    double total = 0.0;
};

/// Total objective: sum_k lambda_k * [final_k + (1/N_v) sum_i (pair + joint)].
double total_loss(std::span<const StageLosses> stages, const std::array<double, 3>& lambdas);

struct AccuracyMetrics {
    double pct_lt1 = 0.0; // % of valid pixels with normalized error < 1
    double pct_lt3 = 0.0;
    double mean_abs_error = 0.0; // in intervals
};

AccuracyMetrics accuracy_metrics(const ImageF& depth, const ImageF& gt,
                                 const ValidityMask& valid, double interval);

struct JointGradients {
    ImageF d_depth;   // sign(D - gt) e^{-S} / (interval * n_valid)
    ImageF d_log_unc; // (1 - e^{-S} |D - gt| / interval) / n_valid
};

JointGradients joint_loss_gradients(const ImageF& depth, const ImageF& log_unc,
                                    const ImageF& gt, const ValidityMask& valid,
                                    double interval);

/// Central finite differences of joint_loss against the analytic gradients;
/// returns the maximum relative discrepancy over valid pixels. Meaningful
/// only away from the |.| kink (|D - gt| > 10 h).
double finite_diff_check(const ImageF& depth, const ImageF& log_unc, const ImageF& gt,
                         const ValidityMask& valid, double interval, double h);

struct FuGrid {
    double a_min = 0.0, a_max = 5.0, a_step = 0.1;
    double b_min = -3.0, b_max = 3.0, b_step = 0.1;
};

/// One pipeline output paired with ground truth, reduced to what the f_u
/// calibration needs.
struct CalibrationSample {
    ImageF entropy_norm;   // H / ln N_d
    ImageF abs_error_norm; // |D - gt| / interval
    ValidityMask valid;
};

/// Grid search for the (a, b) minimizing the mean joint loss over the
/// dataset; ties broken by smaller a, then smaller b. Order independent.
FuParams calibrate_fu(std::span<const CalibrationSample> dataset, const FuGrid& grid);

struct MetricsRow {
    std::string scene;
    int stage = 3;
    std::string strategy;
    double loss = 0.0;
    double pct_lt1 = 0.0;
    double pct_lt3 = 0.0;
    double mae = 0.0;
};

/// Columns: scene,stage,strategy,loss,pct_lt1,pct_lt3,mae.
void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows);

} // namespace vismvs
