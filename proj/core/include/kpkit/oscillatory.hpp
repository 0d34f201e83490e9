#pragma once

#include "kpkit/multipliers.hpp"

namespace kpkit {

// Piecewise exponent tables for the dyadic kernel bounds.
double exponent_alpha(int k, int j); // (5/2)k + j for k >= 0, j for k <= 0
double exponent_delta(int k, int j); // three-case table
double exponent_beta(int k, int j);  // k/2 + j for k >= j, 3k/2 for k < j

/// Indicator-function variant of the alpha table recorded alongside the
/// sweep output; never asserted.
double exponent_alpha_alt(int k, int j);

struct KernelEvalSpec {
    DyadicIndex idx;
    double t = 0.0;              // |t| <= 1
    int quad_points = 64;        // per block per axis, raised to 8 points/cycle
    int max_quad_points = 20000; // refusal cap
    int s_max = 8;               // y unit cells summed (>= 8)
    int r_max = 8;               // x unit cells summed (>= 8)
};

/// Direct tensor Gauss-Legendre quadrature of the dyadic oscillatory kernel
/// at one point. The lambda integral runs over mu = lambda/xi, so each sign
/// quadrant is a box. Points per axis are raised to 8x the worst phase-cycle
/// count; past max_quad_points the evaluation refuses.
cplx eval_kernel(const KernelEvalSpec& spec, double x, double y);

/// Budget the refusal rule would assign to this evaluation, per axis.
std::pair<int, int> kernel_budget(const KernelEvalSpec& spec, double x, double y);

struct KernelSweepConfig {
    std::vector<double> t_samples{1.0, 0.25, 0.0625, 0.015625, 0.00390625};
    int s_max = 8;
    int r_max = 8;
    int quad_points = 64;
    int max_quad_points = 20000;
    int samples_per_unit = 8; // lattice samples per unit cell
    double x_reach_cap = 96.0;
    double y_reach_cap = 48.0;
    int threads = 1;
};

struct KernelRow {
    int k = 0, j = 0;
    double t = 0.0;
    double s_y = 0.0, s_x = 0.0;
    double resolved_fraction = 1.0;
};

struct KernelBlockResult {
    DyadicIndex idx;
    double s_y = 0.0, s_x = 0.0; // cell sups aggregated over all t samples
    double alpha = 0.0, delta = 0.0, alpha_alt = 0.0;
    double ratio_y = 0.0, ratio_x = 0.0; // S / 2^exponent
    double resolved_fraction = 1.0;      // fraction of cells passing the 2x check
    double vdc_ratio = 0.0;              // sup |I^1| / 2^beta when admissible
    bool vdc_applicable = false;
    std::vector<KernelRow> rows;         // one per t sample
};

/// Lattice sums of cell suprema of |I^t_{k,j}| against the exponent tables.
/// Every cell supremum is cross-checked between the full budget and half the
/// budget; cells moving more than 1e-4 relative are excluded and counted.
KernelBlockResult verify_kernel_bound(DyadicIndex idx, const KernelSweepConfig& cfg);

struct KernelSweepResult {
    std::vector<KernelBlockResult> blocks;
    // Least-squares slopes of log2 S along one index with the other fixed at
    // the window minimum.
    double slope_sy_k = 0.0, slope_sy_j = 0.0;
    double slope_sx_k = 0.0, slope_sx_j = 0.0;
};

KernelSweepResult kernel_sweep(int k_lo, int k_hi, int j_lo, int j_hi,
                               const KernelSweepConfig& cfg);

} // namespace kpkit
