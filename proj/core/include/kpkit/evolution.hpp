#pragma once

#include "kpkit/dispersion.hpp"
#include "kpkit/norms.hpp"

namespace kpkit {

/// Linear group U(t): multiply by e^{i t phi}. Requires zero xi=0 column.
SpectralField propagate(const SpectralField& F, double t, DispersionSign s);

/// int_0^t U(t-t') f(t') dt' by composite Simpson on the forcing nodes
/// (3/8 tail on odd prefixes). t must be a forcing node with at least
/// min_subintervals subintervals below it.
SpectralField duhamel(const std::vector<double>& times,
                      const std::vector<SpectralField>& forcing, double t,
                      DispersionSign s, int min_subintervals = 8);

/// Same on a sampled physical forcing; M is the expected subinterval count
/// for [0, t] and must match the trajectory.
SpectralField duhamel(const TrajectoryField& forcing, double t, DispersionSign s,
                      int M);

/// Duhamel integral at every forcing node (fourth-order prefix rules; the
/// first node uses a cubic start).
std::vector<SpectralField> duhamel_all(const std::vector<double>& times,
                                       const std::vector<SpectralField>& forcing,
                                       DispersionSign s);

/// U(t) F sampled on nt+1 uniform times in [t0, t1].
TrajectoryField linear_trajectory(const SpectralField& F, double t0, double t1,
                                  int nt, DispersionSign s);

enum class Nonlinearity { kp_quadratic, mkp_cubic };

/// Projected nonlinear forcing pair (Q dx N, (Id-Q) dx N) with
/// N = (w+v)^2 (or (w+v)^3/3), products dealiased by the 2/3 rule.
std::pair<SpectralField, SpectralField> nonlinear_term(const SpectralField& w,
                                                       const SpectralField& v,
                                                       Nonlinearity kind);

struct PicardConfig {
    double T = 0.5;
    double beta = 1.0;
    int max_iter = 25;
    double tol = 1e-10;      // relative fixed-point residual in the X/Y norms
    int M = 64;              // Duhamel subintervals on [0, T]
    double epsilon = 0.05;   // exponent slack for the X/Y norms
    Nonlinearity nonlinearity = Nonlinearity::kp_quadratic;
    DispersionSign sign = DispersionSign::kp1;
};

struct PicardIterateStats {
    int iter = 0;
    double x_norm_w = 0.0;
    double y_norm_v = 0.0;
    double diff = 0.0;   // max(X(w' - w), Y(v' - v))
    double ratio = 0.0;  // diff / previous diff (0 on the first iterate)
};

struct ContractionReport {
    std::vector<PicardIterateStats> iterates;
    bool converged = false;
    int iterations = 0;
    double final_diff = 0.0;
    double max_split_leak = 0.0; // worst Q-energy of v / lowpass-energy of w
};

struct PicardResult {
    TrajectoryField u; // w + v at the M+1 Duhamel nodes
    ContractionReport report;
};

/// Thrown when the Picard iteration grows past 1e6x the initial norm.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string msg, std::vector<PicardIterateStats> hist)
        : std::runtime_error(std::move(msg)), history(std::move(hist)) {}
    std::vector<PicardIterateStats> history;
};

/// Split high/low fixed-point solver: iterates the Duhamel operator on the
/// pair (w, v) = (Qu, (Id-Q)u) until the successive X/Y-norm difference
/// drops below tol times the current norm.
PicardResult picard_solve(const PhysicalField& u0, const PicardConfig& cfg);

/// Integrating-factor RK4 in the frame v = e^{-i t phi} u; independent
/// cross-check for picard_solve. sample_every controls output density.
TrajectoryField reference_integrate(const PhysicalField& u0, double T, double dt,
                                    DispersionSign s, double beta,
                                    Nonlinearity kind, int sample_every = 1);

/// u_rho(x, y) = rho^2 u(rho x, rho^2 y) realized exactly in frequency space
/// on the derived grid [-Lx/rho, Lx/rho) x [-Ly/rho^2, Ly/rho^2).
/// rho must be a dyadic 2^{-m}.
PhysicalField rescale_field(const PhysicalField& u, double rho);

struct ScalingCheck {
    std::string id;
    double target = 0.0;
    double fitted = 0.0;
    double max_ratio_dev = 0.0; // max over rho of |norm/(rho^target * base) - 1|
};

/// Log-log slope fits of the rescaling laws over the given rho set.
std::vector<ScalingCheck> scaling_checks(const PhysicalField& u,
                                         const std::vector<double>& rhos);

struct ResidualReport {
    double rel_residual = 0.0;          // max_t ||residual||_2 / max_t ||u||_2
    std::vector<double> times;          // interior sample times
    std::vector<double> residual_l2;
    double scale = 0.0;
};

/// Discrete KP residual d_t u + dx^3 u + gamma dx^{-1} dy^2 u + beta dx N(u)
/// via spectral space derivatives and centered time differences.
ResidualReport pde_residual(const TrajectoryField& traj, DispersionSign s,
                            double beta, Nonlinearity kind);

/// L2 norm time series (conservation diagnostic).
std::vector<double> l2_series(const TrajectoryField& traj);

} // namespace kpkit
