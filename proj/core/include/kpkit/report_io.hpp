#pragma once

#include <string>

#include "kpkit/evolution.hpp"
#include "kpkit/harness.hpp"
#include "kpkit/oscillatory.hpp"

namespace kpkit {

/// 17-significant-digit decimal, locale-independent.
std::string fmt17(double v);

void write_text_file(const std::string& path, const std::string& content);

// Per-estimate CSV: sample, seed, grid, lhs, rhs, ratio.
std::string estimate_csv(const EstimateReport& rep);

// Summary JSON over all estimates (schema documented in the README).
std::string estimates_summary_json(const SweepSummary& sweep, std::uint64_t seed);

// Kernel sweep CSV: k, j, t, S_y, S_x, alpha, delta, ratio_y, ratio_x,
// resolved_fraction, alpha_alt.
std::string kernel_csv(const KernelSweepResult& res);
std::string kernel_summary_json(const KernelSweepResult& res);

std::string scaling_json(const std::vector<ScalingCheck>& checks);

std::string contraction_json(const ContractionReport& rep);

NormRecord make_norm_record(const std::string& id,
                            std::vector<std::pair<std::string, double>> params,
                            double value,
                            std::vector<std::pair<std::string, double>> components);
std::string norm_records_json(const std::vector<NormRecord>& records);
std::string norm_records_csv(const std::vector<NormRecord>& records);

/// Small-grid trajectory export: header t,x,y,u.
std::string trajectory_csv(const TrajectoryField& traj);

/// Compact spectral dump: per time a line "t <value>" followed by
/// "m n re im" lines for nonzero coefficients.
std::string spectral_dump(const TrajectoryField& traj);

/// Two-column time series CSV.
std::string series_csv(const std::string& h1, const std::string& h2,
                       const std::vector<double>& a, const std::vector<double>& b);

/// 8-bit grayscale PNG of a field (linear map min->0, max->255).
void write_png_heatmap(const std::string& path, const PhysicalField& f);

/// Histogram PNG of sample ratios (bars on a 256x160 canvas).
void write_png_histogram(const std::string& path, const std::vector<double>& values);

} // namespace kpkit
