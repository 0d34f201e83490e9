#pragma once

#include "kpkit/evolution.hpp"
#include "kpkit/random_field.hpp"

namespace kpkit {

struct EstimateConfig {
    std::uint64_t seed = 20260808;
    int samples = 50;
    std::vector<std::pair<double, double>> decay_profiles{{2.0, 2.0}, {3.0, 1.5}, {1.5, 3.0}};
    double epsilon = 0.05;
    double Lx = 16.0, Ly = 16.0;
    int coarse_n = 64;      // fine grid doubles this
    int time_samples = 64;  // panels on the time interval (>= 64 for maximal norms)
    int threads = 1;
};

struct SampleRatio {
    int sample = 0;
    std::uint64_t seed = 0;
    int grid_n = 0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct EstimateReport {
    std::string id;
    std::vector<SampleRatio> rows; // coarse rows then fine rows, sample order
    double max_ratio_coarse = 0.0;
    double max_ratio_fine = 0.0;
    double median_ratio = 0.0;     // over the fine grid
    double growth = 0.0;           // max_fine / max_coarse - 1
    bool resolved = true;          // no per-sample ratio moved > 20%
    bool pass = false;             // ratios finite and growth < 20%
};

/// Ids in catalog order.
const std::vector<std::string>& estimate_catalog();

EstimateReport run_estimate_check(const std::string& id, const EstimateConfig& cfg);

struct SweepSummary {
    std::vector<EstimateReport> reports;
    bool all_pass = false;
};

SweepSummary run_all_estimates(const EstimateConfig& cfg,
                               const std::vector<std::string>& ids = {});

/// Appendix checks on 1-D fields; exposed separately so the zero-commutator
/// and two-path oracles can target them directly.
double leibniz_defect_ratio(int n, double L, double sigma, std::uint64_t seed);
double weight_commutator_ratio(int n, double L, double alpha, double gamma,
                               std::uint64_t seed);

} // namespace kpkit
