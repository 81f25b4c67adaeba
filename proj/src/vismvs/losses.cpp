#include "vismvs/losses.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace vismvs {

namespace {

void check_domain(const ImageF& depth, const ImageF& gt, const ValidityMask& valid,
                  double interval) {
    if (!depth.same_size(gt) || !depth.same_size(valid))
        throw std::invalid_argument("loss: map shapes differ");
    if (!(interval > 0.0))
        throw std::invalid_argument("loss: interval must be positive");
    if (count_valid(valid) == 0)
        throw std::invalid_argument("loss: no valid pixels");
}

} // namespace

double l1_loss(const ImageF& depth, const ImageF& gt, const ValidityMask& valid,
               double interval) {
    check_domain(depth, gt, valid, interval);
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!valid[i]) continue;
        acc += std::abs(static_cast<double>(depth[i]) - gt[i]) / interval;
        ++n;
    }
    return acc / n;
}

double joint_loss(const ImageF& depth, const ImageF& log_unc, const ImageF& gt,
                  const ValidityMask& valid, double interval) {
    check_domain(depth, gt, valid, interval);
    if (!log_unc.same_size(depth))
        throw std::invalid_argument("joint_loss: S map shape differs");
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!valid[i]) continue;
        const double err = std::abs(static_cast<double>(depth[i]) - gt[i]) / interval;
        const double s = log_unc[i];
        acc += std::exp(-s) * err + s;
        ++n;
    }
    return acc / n;
}

double total_loss(std::span<const StageLosses> stages, const std::array<double, 3>& lambdas) {
    if (stages.size() != 3)
        throw std::invalid_argument("total_loss: need exactly 3 stages");
    const std::size_t nv = stages[0].pair_l1.size();
    for (const StageLosses& s : stages)
        if (s.pair_l1.size() != nv || s.pair_joint.size() != nv)
            throw std::invalid_argument("total_loss: inconsistent view counts");
    if (nv == 0)
        throw std::invalid_argument("total_loss: no pair losses");
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        double pair_sum = 0.0;
        for (std::size_t i = 0; i < nv; ++i)
            pair_sum += stages[k].pair_l1[i] + stages[k].pair_joint[i];
        total += lambdas[k] * (stages[k].final_l1 + pair_sum / static_cast<double>(nv));
    }
    return total;
}

AccuracyMetrics accuracy_metrics(const ImageF& depth, const ImageF& gt,
                                 const ValidityMask& valid, double interval) {
    check_domain(depth, gt, valid, interval);
    std::size_t n = 0, lt1 = 0, lt3 = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!valid[i]) continue;
        const double err = std::abs(static_cast<double>(depth[i]) - gt[i]) / interval;
        if (err < 1.0) ++lt1;
        if (err < 3.0) ++lt3;
        acc += err;
        ++n;
    }
    AccuracyMetrics m;
    m.pct_lt1 = 100.0 * lt1 / n;
    m.pct_lt3 = 100.0 * lt3 / n;
    m.mean_abs_error = acc / n;
    return m;
}

JointGradients joint_loss_gradients(const ImageF& depth, const ImageF& log_unc,
                                    const ImageF& gt, const ValidityMask& valid,
                                    double interval) {
    check_domain(depth, gt, valid, interval);
    const double n = static_cast<double>(count_valid(valid));
    JointGradients g;
    g.d_depth = ImageF(depth.width(), depth.height(), 0.0f);
    g.d_log_unc = ImageF(depth.width(), depth.height(), 0.0f);
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!valid[i]) continue;
        const double diff = static_cast<double>(depth[i]) - gt[i];
        const double s = log_unc[i];
        const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        g.d_depth[i] = static_cast<float>(sign * std::exp(-s) / (interval * n));
        g.d_log_unc[i] =
            static_cast<float>((1.0 - std::exp(-s) * std::abs(diff) / interval) / n);
    }
    return g;
}

double finite_diff_check(const ImageF& depth, const ImageF& log_unc, const ImageF& gt,
                         const ValidityMask& valid, double interval, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("finite_diff_check: step must be positive");
    const JointGradients g = joint_loss_gradients(depth, log_unc, gt, valid, interval);
    double worst = 0.0;
    ImageF d = depth, s = log_unc;
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!valid[i]) continue;
        // Divide by the realized float step, not the nominal one.
        const float d0 = d[i];
        const float dp = static_cast<float>(d0 + h);
        const float dm = static_cast<float>(d0 - h);
        d[i] = dp;
        const double lp = joint_loss(d, log_unc, gt, valid, interval);
        d[i] = dm;
        const double lm = joint_loss(d, log_unc, gt, valid, interval);
        d[i] = d0;
        const double fd_depth = (lp - lm) / (static_cast<double>(dp) - dm);

        const float s0 = s[i];
        const float sp = static_cast<float>(s0 + h);
        const float sm = static_cast<float>(s0 - h);
        s[i] = sp;
        const double lsp = joint_loss(depth, s, gt, valid, interval);
        s[i] = sm;
        const double lsm = joint_loss(depth, s, gt, valid, interval);
        s[i] = s0;
        const double fd_s = (lsp - lsm) / (static_cast<double>(sp) - sm);

        const double an_d = g.d_depth[i];
        const double an_s = g.d_log_unc[i];
        const double rel_d =
            std::abs(fd_depth - an_d) / std::max({std::abs(fd_depth), std::abs(an_d), 1e-12});
        const double rel_s =
            std::abs(fd_s - an_s) / std::max({std::abs(fd_s), std::abs(an_s), 1e-12});
        worst = std::max({worst, rel_d, rel_s});
    }
    return worst;
}

FuParams calibrate_fu(std::span<const CalibrationSample> dataset, const FuGrid& grid) {
    if (dataset.empty())
        throw std::invalid_argument("calibrate_fu: empty dataset");
    if (grid.a_min < 0.0)
        throw std::invalid_argument("calibrate_fu: a grid must be non-negative");
    if (!(grid.a_step > 0.0) || !(grid.b_step > 0.0))
        throw std::invalid_argument("calibrate_fu: steps must be positive");
    for (const CalibrationSample& s : dataset) {
        if (!s.entropy_norm.same_size(s.abs_error_norm) ||
            !s.entropy_norm.same_size(s.valid))
            throw std::invalid_argument("calibrate_fu: sample shapes differ");
        if (count_valid(s.valid) == 0)
            throw std::invalid_argument("calibrate_fu: sample with no valid pixels");
    }

    const int na = static_cast<int>(std::floor((grid.a_max - grid.a_min) / grid.a_step + 1e-9)) + 1;
    const int nb = static_cast<int>(std::floor((grid.b_max - grid.b_min) / grid.b_step + 1e-9)) + 1;

    FuParams best;
    double best_loss = std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (int ia = 0; ia < na; ++ia) {
        const double a = grid.a_min + ia * grid.a_step;
        // Per sample: mean[e^{-aH-b} err + aH + b] = e^{-b} m + a h + b with
        // m = mean(e^{-aH} err), h = mean(H). Sort the per-sample terms so
        // the dataset mean does not depend on input order.
        std::vector<double> ms(dataset.size()), hs(dataset.size());
        for (std::size_t si = 0; si < dataset.size(); ++si) {
            const CalibrationSample& s = dataset[si];
            double m = 0.0, hmean = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < s.valid.size(); ++i) {
                if (!s.valid[i]) continue;
                m += std::exp(-a * s.entropy_norm[i]) * s.abs_error_norm[i];
                hmean += s.entropy_norm[i];
                ++n;
            }
            ms[si] = m / n;
            hs[si] = hmean / n;
        }
        std::sort(ms.begin(), ms.end());
        std::sort(hs.begin(), hs.end());
        double m_mean = 0.0, h_mean = 0.0;
        for (double v : ms) m_mean += v;
        for (double v : hs) h_mean += v;
        m_mean /= static_cast<double>(dataset.size());
        h_mean /= static_cast<double>(dataset.size());

        for (int ib = 0; ib < nb; ++ib) {
            const double b = grid.b_min + ib * grid.b_step;
            const double loss = std::exp(-b) * m_mean + a * h_mean + b;
            if (!have_best || loss < best_loss) {
                best_loss = loss;
                best = FuParams{a, b};
                have_best = true;
            }
        }
    }
    return best;
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_metrics_csv: cannot open " + path.string());
    out << "scene,stage,strategy,loss,pct_lt1,pct_lt3,mae\n";
    out.precision(10);
    for (const MetricsRow& r : rows)
        out << r.scene << "," << r.stage << "," << r.strategy << "," << r.loss << ","
            << r.pct_lt1 << "," << r.pct_lt3 << "," << r.mae << "\n";
    if (!out)
        throw std::runtime_error("write_metrics_csv: write failed for " + path.string());
}

} // namespace vismvs
