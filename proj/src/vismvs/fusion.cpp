#include "vismvs/fusion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vismvs {

FusionStrategy parse_fusion_strategy(const std::string& name) {
    if (name == "vis") return FusionStrategy::vis_weighted;
    if (name == "var") return FusionStrategy::variance;
    if (name == "ave") return FusionStrategy::average;
    if (name == "max") return FusionStrategy::max_pool;
    throw std::invalid_argument("unknown fusion strategy: " + name);
}

std::string fusion_strategy_name(FusionStrategy s) {
    switch (s) {
    case FusionStrategy::vis_weighted: return "vis";
    case FusionStrategy::variance: return "var";
    case FusionStrategy::average: return "ave";
    case FusionStrategy::max_pool: return "max";
    }
    return "?";
}

CostVolume fuse_volumes(std::span<const CostVolume> vols,
                        std::span<const ImageF> log_uncertainties,
                        FusionStrategy strategy) {
    if (vols.empty())
        throw std::invalid_argument("fuse_volumes: no volumes");
    const CostVolume& first = vols[0];
    for (const CostVolume& v : vols) {
        if (v.width() != first.width() || v.height() != first.height() ||
            v.depth_count() != first.depth_count() || v.groups() != first.groups())
            throw std::invalid_argument("fuse_volumes: shape mismatch");
        if (!(v.hypotheses() == first.hypotheses()))
            throw std::invalid_argument("fuse_volumes: hypothesis mismatch");
    }
    const int nv = static_cast<int>(vols.size());
    if (nv > 64)
        throw std::invalid_argument("fuse_volumes: more than 64 views");
    if (strategy == FusionStrategy::vis_weighted) {
        if (static_cast<int>(log_uncertainties.size()) != nv)
            throw std::invalid_argument("fuse_volumes: need one S map per volume");
        for (const ImageF& s : log_uncertainties)
            if (s.width() != first.width() || s.height() != first.height())
                throw std::invalid_argument("fuse_volumes: S map shape mismatch");
    }

    const int w = first.width(), h = first.height();
    const int nd = first.depth_count();
    const int groups = first.groups();
    const std::size_t px = static_cast<std::size_t>(w) * h;

    CostVolume out(first.hypotheses(), w, h, groups);
    float* dst = out.data().data();
    std::uint8_t* dvalid = out.validity().data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(px); ++i) {
        // Per-pixel view weights; only vis_weighted uses them. Shift by the
        // minimum S so the exponentials are well conditioned (weights are
        // normalized, so the shift cancels).
        double wview[64];
        if (strategy == FusionStrategy::vis_weighted) {
            double smin = log_uncertainties[0][i];
            for (int v = 1; v < nv; ++v)
                smin = std::min(smin, static_cast<double>(log_uncertainties[v][i]));
            for (int v = 0; v < nv; ++v)
                wview[v] = std::exp(-(static_cast<double>(log_uncertainties[v][i]) - smin));
        }
        for (int j = 0; j < nd; ++j) {
            const std::size_t k = static_cast<std::size_t>(j) * px + i;
            int n_valid = 0;
            bool all_valid = true;
            for (int v = 0; v < nv; ++v) {
                if (vols[v].validity()[k]) ++n_valid;
                else all_valid = false;
            }
            float* o = dst + k * groups;
            switch (strategy) {
            case FusionStrategy::vis_weighted: {
                if (n_valid == 0) break;
                double wsum = 0.0;
                for (int v = 0; v < nv; ++v)
                    if (vols[v].validity()[k]) wsum += wview[v];
                for (int g = 0; g < groups; ++g) {
                    double acc = 0.0;
                    for (int v = 0; v < nv; ++v)
                        if (vols[v].validity()[k])
                            acc += wview[v] * vols[v].data()[k * groups + g];
                    o[g] = static_cast<float>(acc / wsum);
                }
                dvalid[k] = 1;
                break;
            }
            case FusionStrategy::average: {
                if (n_valid == 0) break;
                for (int g = 0; g < groups; ++g) {
                    double acc = 0.0;
                    for (int v = 0; v < nv; ++v)
                        if (vols[v].validity()[k])
                            acc += vols[v].data()[k * groups + g];
                    o[g] = static_cast<float>(acc / n_valid);
                }
                dvalid[k] = 1;
                break;
            }
            case FusionStrategy::max_pool: {
                if (n_valid == 0) break;
                for (int g = 0; g < groups; ++g) {
                    float best = -std::numeric_limits<float>::infinity();
                    for (int v = 0; v < nv; ++v)
                        if (vols[v].validity()[k])
                            best = std::max(best, vols[v].data()[k * groups + g]);
                    o[g] = best;
                }
                dvalid[k] = 1;
                break;
            }
            case FusionStrategy::variance: {
                if (!all_valid) break;
                for (int g = 0; g < groups; ++g) {
                    double sum = 0.0, sum2 = 0.0;
                    for (int v = 0; v < nv; ++v) {
                        const double x = vols[v].data()[k * groups + g];
                        sum += x;
                        sum2 += x * x;
                    }
                    const double mean = sum / nv;
                    const double var = sum2 / nv - mean * mean;
                    o[g] = static_cast<float>(var > 0.0 ? var : 0.0);
                }
                dvalid[k] = 1;
                break;
            }
            }
        }
    }
    return out;
}

ProbabilityVolume regularize_fused(const CostVolume& vol, int box_radius,
                                   int depth_radius, double temperature) {
    return to_probability(regularize_pair(vol, box_radius, depth_radius), temperature);
}

} // namespace vismvs
