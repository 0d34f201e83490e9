#pragma once

#include <cmath>
#include <functional>

#include "kpkit/fft.hpp"

namespace kpkit {

/// Address of the dyadic block |xi| ~ 2^k, |lambda/xi| ~ 2^j.
struct DyadicIndex {
    int k = 0;
    int j = 0;
};

/// Smooth even profile on [1/2, 2] with the exact squared partition
/// sum_k psi(2^{-k} r)^2 = 1 for all r > 0: psi(r) = cos(pi/2 * log2 r).
struct BumpProfile {
    double operator()(double r) const {
        if (r <= 0.5 || r >= 2.0) return 0.0;
        return std::cos(0.5 * pi * std::log2(r));
    }
};

/// theta_{k,j}(xi, lambda) = psi(2^{-k}|xi|) psi(2^{-j}|lambda/xi|), zero at xi=0.
inline double theta_kj(double xi, double lambda, DyadicIndex idx,
                       const BumpProfile& psi = {}) {
    if (xi == 0.0) return 0.0;
    double a = psi(std::ldexp(std::abs(xi), -idx.k));
    if (a == 0.0) return 0.0;
    return a * psi(std::ldexp(std::abs(lambda / xi), -idx.j));
}

/// Pointwise multiplier application in frequency space. The reality flag
/// survives iff m(-xi,-lambda) = conj(m(xi,lambda)) on the lattice.
/// Rejects non-finite multiplier values.
template <typename M>
SpectralField apply_multiplier(const SpectralField& F, M&& m) {
    const Grid2D& g = F.grid;
    SpectralField R(g, false);
    std::vector<cplx> vals(g.size());
    for (int p = 0; p < g.Nx; ++p) {
        double xi = g.xi(p);
        for (int q = 0; q < g.Ny; ++q) {
            cplx w = m(xi, g.lambda(q));
            require(std::isfinite(w.real()) && std::isfinite(w.imag()),
                    "apply_multiplier: non-finite multiplier value");
            vals[g.at(p, q)] = w;
            R.at(p, q) = w * F.at(p, q);
        }
    }
    // Nyquist rows are excluded: they are their own mirror and always zeroed.
    bool hermitian = true;
    for (int p = 0; p < g.Nx && hermitian; ++p) {
        if (g.mode_x(p) == -g.Nx / 2) continue;
        int pm = g.index_x(-g.mode_x(p));
        for (int q = 0; q < g.Ny; ++q) {
            if (g.mode_y(q) == -g.Ny / 2) continue;
            int qm = g.index_y(-g.mode_y(q));
            cplx w = vals[g.at(p, q)], wm = vals[g.at(pm, qm)];
            double scale = std::max(1.0, std::abs(w));
            if (std::abs(wm - std::conj(w)) > 1e-12 * scale) {
                hermitian = false;
                break;
            }
        }
    }
    R.real_symmetric = F.real_symmetric && hermitian;
    for (int p = 0; p < g.Nx; ++p) R.at(p, g.Ny / 2) = 0.0;
    for (int q = 0; q < g.Ny; ++q) R.at(g.Nx / 2, q) = 0.0;
    return R;
}

// Sharp projections, exactly as defined: indicators in frequency.
SpectralField project_Q(const SpectralField& F);        // keep |xi| >= 1
SpectralField project_lowpass(const SpectralField& F);  // Id - Q
SpectralField project_Pplus(const SpectralField& F);    // keep xi^2 >= |lambda|
SpectralField project_Pminus(const SpectralField& F);   // Id - P+

// The two distinct Q-tilde cutoffs; never aliased.
SpectralField project_Qtilde_ratio(const SpectralField& F); // keep |lambda/xi| >= 1
SpectralField project_Qtilde_y(const SpectralField& F);     // keep |lambda| >= 1

/// Smooth dyadic block T_{k,j} (multiplier theta_{k,j}).
SpectralField block_Tkj(const SpectralField& F, DyadicIndex idx,
                        const BumpProfile& psi = {});

/// One-dimensional dyadic block in xi: multiplier psi(2^{-k}|xi|).
SpectralField block_Pk(const SpectralField& F, int k, const BumpProfile& psi = {});

/// Rectangle block psi(2^{-k}|xi|) psi(2^{-j}|lambda|).
SpectralField block_Pkj_rect(const SpectralField& F, int k, int j,
                             const BumpProfile& psi = {});

enum class Axis { x, y };
enum class FracKind { homogeneous, inhomogeneous };

/// D^sigma (multiplier |xi|^sigma) or (1+D)^sigma (multiplier (1+|xi|)^sigma)
/// along one axis. Homogeneous negative orders require the corresponding
/// zero-frequency line to carry < 1e-13 of the total energy.
struct FracDerivSpec {
    Axis axis = Axis::x;
    double order = 0.0; // >= -2
    FracKind kind = FracKind::homogeneous;
};

SpectralField frac_deriv(const SpectralField& F, const FracDerivSpec& spec);

/// Multiplier 1/(i xi); requires zero xi=0 column.
SpectralField antideriv_x(const SpectralField& F);

// d/dx and d/dy (multipliers i*xi, i*lambda).
SpectralField deriv_x(const SpectralField& F);
SpectralField deriv_y(const SpectralField& F);

/// Pointwise weight <y>^alpha = (1+y^2)^{alpha/2} on the fundamental cell.
/// alpha in [0, 2]. The weight is discontinuous across the periodic seam;
/// checks use data decaying before the boundary.
PhysicalField weight_y(const PhysicalField& f, double alpha);

/// Plain |y|^alpha weight (used by the scaling-law checks).
PhysicalField weight_abs_y(const PhysicalField& f, double alpha);

/// 2/3-rule dealiasing: zero modes with |m| > Nx/3 or |n| > Ny/3.
SpectralField dealias_two_thirds(const SpectralField& F);

/// Fraction of energy violating the given support indicator.
double support_violation(const SpectralField& F,
                         const std::function<bool(double, double)>& keep);

/// Energy fraction outside Q (resp. outside Id-Q).
double q_complement_energy_fraction(const SpectralField& F);
double q_energy_fraction(const SpectralField& F);

} // namespace kpkit
