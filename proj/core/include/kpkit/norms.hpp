#pragma once

#include <array>
#include <limits>
#include <string>
#include <utility>

#include "kpkit/multipliers.hpp"

namespace kpkit {

/// Sampled u(x, y, t) on [t_0, t_M]; times strictly increasing.
struct TrajectoryField {
    Grid2D grid;
    std::vector<double> times;
    std::vector<PhysicalField> slices;

    std::size_t nt() const { return times.size(); }
};

TrajectoryField make_trajectory(const Grid2D& g, std::vector<double> times,
                                std::vector<PhysicalField> slices);

enum class Var { t, x, y };

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Nested mixed Lebesgue norm. order = {outer, mid, inner}; exps holds the
/// matching exponents, with `inf` realized as the lattice max. Quadrature
/// weights are dx, dy and trapezoidal dt.
struct MixedSpec {
    std::array<Var, 3> order{Var::t, Var::x, Var::y};
    std::array<double, 3> exps{2.0, 2.0, 2.0};
};

double mixed_norm(const TrajectoryField& traj, const MixedSpec& spec);

/// ||<y>^alpha D_x^sigma D_y^gamma f||_2, with (1+D)^ when undotted.
double weighted_sobolev_norm(const PhysicalField& f, double sigma, double gamma,
                             double alpha, bool dotted_x, bool dotted_y);

/// H^2 realization: ||f||_2 + ||D_x^2 f||_2 + ||D_y^2 f||_2.
double h2_norm(const PhysicalField& f);

struct Z0Result {
    double total = 0.0;
    // [0] H^2, [1..3] the three (Id-Q) components, [4..6] the three Q components.
    std::array<double, 7> components{};
};

/// The data norm: sum of seven weighted anisotropic Sobolev components with
/// the exponent table alpha=gamma0=sigma0=gamma3=1/2+eps, sigma1=1/4+eps,
/// sigma2=sigma3=3/4+eps, sigma4=gamma1=gamma4=1+eps, gamma2=3/2+eps.
Z0Result z0_norm(const PhysicalField& f, double eps);

/// Exponents of the twelve trajectory norms; defaults are the smallest
/// admissible orders shifted by eps.
struct XNormParams {
    double sigma1 = 0.8;  // > 3/4
    double gamma1 = 0.55; // > 1/2
    double sigma2 = 1.05; // > 1
    double gamma2 = 1.05; // > 1
    double alpha = 0.55;  // > 1/2
    static XNormParams from_epsilon(double eps);
};

/// The i-th trajectory norm, i in 1..12. Norms 5..8 require Q-supported
/// trajectories.
double x_norm(const TrajectoryField& traj, int i, const XNormParams& params);

struct NormBreakdown {
    double value = 0.0;
    std::vector<std::pair<std::string, double>> components;
};

/// max over i = 1..12.
NormBreakdown x_norm_full(const TrajectoryField& traj, const XNormParams& params);

/// max over i in {1, 3, 9, 10, 11, 12}; trajectory must be (Id-Q)-supported.
NormBreakdown y_norm_set(const TrajectoryField& traj, const XNormParams& params);

/// Data-norm variants (time-free). x0 applies Q, y0 applies (Id-Q) before
/// evaluating the components.
NormBreakdown x0_norm(const PhysicalField& f, const XNormParams& params);
NormBreakdown y0_norm(const PhysicalField& f, double eps);

enum class LatticeDir { y_outer, x_outer };

/// (sum over unit cells of sup_cell |<y>^alpha u|^2)^{1/2}; the sup runs over
/// lattice samples in the cell, all samples of the other variable, and all
/// times. Outer half-length must be >= 4.
double lattice_maximal_norm(const TrajectoryField& traj, LatticeDir dir,
                            double weight_alpha);

/// Flat record for CSV/JSON reports.
struct NormRecord {
    std::string id;
    std::vector<std::pair<std::string, double>> params;
    double value = 0.0;
    std::vector<std::pair<std::string, double>> components;
};

/// Declarative description of any norm in the toolkit; evaluate_norm turns
/// it into a flat record. Time-free kinds read the first trajectory slice.
struct NormSpec {
    enum class Kind {
        mixed_lebesgue,
        weighted_sobolev,
        z0,
        x_i,
        y_set,
        x0,
        y0,
        lattice_maximal
    };
    Kind kind = Kind::mixed_lebesgue;
    MixedSpec mixed{};
    double sigma = 0.0, gamma = 0.0, alpha = 0.0;
    bool dotted_x = false, dotted_y = false;
    double eps = 0.05;
    int i = 1;
    LatticeDir dir = LatticeDir::y_outer;
    double weight_alpha = 0.0;
};

NormRecord evaluate_norm(const NormSpec& spec, const TrajectoryField& traj);

} // namespace kpkit
