#include "kpkit/multipliers.hpp"

namespace kpkit {

namespace {

template <typename Keep>
SpectralField sharp_projection(const SpectralField& F, Keep&& keep) {
    SpectralField R(F.grid, F.real_symmetric);
    const Grid2D& g = F.grid;
    for (int p = 0; p < g.Nx; ++p) {
        double xi = g.xi(p);
        for (int q = 0; q < g.Ny; ++q)
            if (keep(xi, g.lambda(q))) R.at(p, q) = F.at(p, q);
    }
    return R;
}

} // namespace

SpectralField project_Q(const SpectralField& F) {
    return sharp_projection(F, [](double xi, double) { return std::abs(xi) >= 1.0; });
}

SpectralField project_lowpass(const SpectralField& F) {
    return sharp_projection(F, [](double xi, double) { return std::abs(xi) < 1.0; });
}

SpectralField project_Pplus(const SpectralField& F) {
    return sharp_projection(
        F, [](double xi, double lam) { return xi * xi >= std::abs(lam); });
}

SpectralField project_Pminus(const SpectralField& F) {
    return sharp_projection(
        F, [](double xi, double lam) { return xi * xi < std::abs(lam); });
}

SpectralField project_Qtilde_ratio(const SpectralField& F) {
    return sharp_projection(F, [](double xi, double lam) {
        return xi == 0.0 || std::abs(lam / xi) >= 1.0;
    });
}

SpectralField project_Qtilde_y(const SpectralField& F) {
    return sharp_projection(
        F, [](double, double lam) { return std::abs(lam) >= 1.0; });
}

SpectralField block_Tkj(const SpectralField& F, DyadicIndex idx,
                        const BumpProfile& psi) {
    return apply_multiplier(
        F, [&](double xi, double lam) { return cplx(theta_kj(xi, lam, idx, psi), 0.0); });
}

SpectralField block_Pk(const SpectralField& F, int k, const BumpProfile& psi) {
    return apply_multiplier(F, [&](double xi, double) {
        return cplx(psi(std::ldexp(std::abs(xi), -k)), 0.0);
    });
}

SpectralField block_Pkj_rect(const SpectralField& F, int k, int j,
                             const BumpProfile& psi) {
    return apply_multiplier(F, [&](double xi, double lam) {
        return cplx(psi(std::ldexp(std::abs(xi), -k)) *
                        psi(std::ldexp(std::abs(lam), -j)),
                    0.0);
    });
}

SpectralField frac_deriv(const SpectralField& F, const FracDerivSpec& spec) {
    require(spec.order >= -2.0, "frac_deriv: order must be >= -2");
    const bool homog = spec.kind == FracKind::homogeneous;
    if (homog && spec.order < 0.0) {
        // Negative homogeneous powers blow up on the zero-frequency line.
        double frac;
        if (spec.axis == Axis::x) {
            frac = zero_xmean_energy_fraction(F);
        } else {
            double line = 0.0;
            for (int p = 0; p < F.grid.Nx; ++p) line += std::norm(F.at(p, 0));
            double tot = energy(F);
            frac = tot == 0.0 ? 0.0 : line / tot;
        }
        require(frac <= 1e-13,
                "frac_deriv: homogeneous negative order on a field with "
                "zero-frequency-line energy");
    }
    const double s = spec.order;
    auto mult = [&](double xi, double lam) {
        double r = spec.axis == Axis::x ? std::abs(xi) : std::abs(lam);
        double w;
        if (homog)
            w = r == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(r, s);
        else
            w = std::pow(1.0 + r, s);
        return cplx(w, 0.0);
    };
    return apply_multiplier(F, mult);
}

SpectralField antideriv_x(const SpectralField& F) {
    require(zero_xmean_energy_fraction(F) <= 1e-13,
            "antideriv_x: field carries energy on the xi=0 column");
    return apply_multiplier(F, [](double xi, double) {
        return xi == 0.0 ? cplx(0.0, 0.0) : 1.0 / cplx(0.0, xi);
    });
}

SpectralField deriv_x(const SpectralField& F) {
    return apply_multiplier(F, [](double xi, double) { return cplx(0.0, xi); });
}

SpectralField deriv_y(const SpectralField& F) {
    return apply_multiplier(F, [](double, double lam) { return cplx(0.0, lam); });
}

PhysicalField weight_y(const PhysicalField& f, double alpha) {
    require(alpha >= 0.0 && alpha <= 2.0, "weight_y: alpha must be in [0, 2]");
    PhysicalField r = f;
    const Grid2D& g = f.grid;
    for (int j = 0; j < g.Ny; ++j) {
        double y = g.y(j);
        double w = std::pow(1.0 + y * y, 0.5 * alpha);
        for (int i = 0; i < g.Nx; ++i) r.at(i, j) *= w;
    }
    return r;
}

PhysicalField weight_abs_y(const PhysicalField& f, double alpha) {
    require(alpha >= 0.0 && alpha <= 2.0, "weight_abs_y: alpha must be in [0, 2]");
    PhysicalField r = f;
    const Grid2D& g = f.grid;
    for (int j = 0; j < g.Ny; ++j) {
        double w = std::pow(std::abs(g.y(j)), alpha);
        for (int i = 0; i < g.Nx; ++i) r.at(i, j) *= w;
    }
    return r;
}

SpectralField dealias_two_thirds(const SpectralField& F) {
    const Grid2D& g = F.grid;
    SpectralField R = F;
    for (int p = 0; p < g.Nx; ++p) {
        bool kill_x = 3 * std::abs(g.mode_x(p)) > g.Nx;
        for (int q = 0; q < g.Ny; ++q)
            if (kill_x || 3 * std::abs(g.mode_y(q)) > g.Ny) R.at(p, q) = 0.0;
    }
    return R;
}

double support_violation(const SpectralField& F,
                         const std::function<bool(double, double)>& keep) {
    const Grid2D& g = F.grid;
    double bad = 0.0, tot = 0.0;
    for (int p = 0; p < g.Nx; ++p) {
        double xi = g.xi(p);
        for (int q = 0; q < g.Ny; ++q) {
            double e = std::norm(F.at(p, q));
            tot += e;
            if (!keep(xi, g.lambda(q))) bad += e;
        }
    }
    return tot == 0.0 ? 0.0 : bad / tot;
}

double q_complement_energy_fraction(const SpectralField& F) {
    return support_violation(
        F, [](double xi, double) { return std::abs(xi) >= 1.0; });
}

double q_energy_fraction(const SpectralField& F) {
    return support_violation(
        F, [](double xi, double) { return std::abs(xi) < 1.0; });
}

} // namespace kpkit
