#include "kpkit/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace kpkit {

namespace {

std::vector<double> phase_table(const Grid2D& g, DispersionSign s) {
    std::vector<double> phi(g.size());
    for (int p = 0; p < g.Nx; ++p) {
        double xi = g.xi(p);
        for (int q = 0; q < g.Ny; ++q)
            phi[g.at(p, q)] = dispersion_phi(xi, g.lambda(q), s);
    }
    return phi;
}

void rotate(SpectralField& F, const std::vector<double>& phi, double t) {
    for (std::size_t k = 0; k < F.c.size(); ++k)
        F.c[k] *= cplx(std::cos(t * phi[k]), std::sin(t * phi[k]));
}

// Fourth-order quadrature weights for int_{t_0}^{t_m} on uniform nodes:
// composite Simpson, 3/8 tail on odd prefixes, 4-node cubic rule for m = 1.
// The returned vector may extend past node m (m = 1 uses nodes 0..3).
std::vector<double> prefix_weights(int m, double h) {
    require(m >= 1, "quadrature: empty interval");
    if (m == 1) return {3.0 * h / 8.0, 19.0 * h / 24.0, -5.0 * h / 24.0, h / 24.0};
    std::vector<double> w;
    int simpson_end = (m % 2 == 0) ? m : m - 3;
    if (m % 2 == 1 && m < 3)
        throw invalid_input("quadrature: cannot integrate to an odd node < 3");
    w.assign(std::size_t(m) + 1, 0.0);
    for (int l = 0; l < simpson_end; l += 2) {
        w[l] += h / 3.0;
        w[l + 1] += 4.0 * h / 3.0;
        w[l + 2] += h / 3.0;
    }
    if (m % 2 == 1) {
        w[m - 3] += 3.0 * h / 8.0;
        w[m - 2] += 9.0 * h / 8.0;
        w[m - 1] += 9.0 * h / 8.0;
        w[m] += 3.0 * h / 8.0;
    }
    return w;
}

double uniform_step(const std::vector<double>& times) {
    require(times.size() >= 2, "trajectory: need at least two times");
    double h = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i)
        require(std::abs(times[i] - times[0] - double(i) * h) <= 1e-9 * std::max(1.0, std::abs(times.back())),
                "trajectory: nodes must be uniform");
    return h;
}

// N(u) with 2/3-rule dealiasing of inputs and outputs.
SpectralField forcing_product(const SpectralField& U, Nonlinearity kind) {
    PhysicalField u = inverse_transform(dealias_two_thirds(U));
    PhysicalField n(u.grid);
    if (kind == Nonlinearity::kp_quadratic) {
        for (std::size_t k = 0; k < u.v.size(); ++k) n.v[k] = u.v[k] * u.v[k];
    } else {
        for (std::size_t k = 0; k < u.v.size(); ++k)
            n.v[k] = u.v[k] * u.v[k] * u.v[k] / 3.0;
    }
    return dealias_two_thirds(forward_transform(n));
}

} // namespace

SpectralField propagate(const SpectralField& F, double t, DispersionSign s) {
    require(zero_xmean_energy_fraction(F) <= 1e-13,
            "propagate: field carries energy on the xi=0 column");
    SpectralField R = F;
    rotate(R, phase_table(F.grid, s), t);
    return R;
}

SpectralField duhamel(const std::vector<double>& times,
                      const std::vector<SpectralField>& forcing, double t,
                      DispersionSign s, int min_subintervals) {
    require(times.size() == forcing.size() && !times.empty(),
            "duhamel: times/forcing mismatch");
    require(std::abs(times[0]) <= 1e-12, "duhamel: forcing must start at t=0");
    double h = uniform_step(times);
    int m = -1;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) m = int(i);
    require(m >= 0, "duhamel: t outside the forcing span or off-node");
    require(m >= min_subintervals, "duhamel: fewer than the required nodes in [0, t]");

    const Grid2D& g = forcing[0].grid;
    auto phi = phase_table(g, s);
    auto w = prefix_weights(m, h);
    SpectralField acc(g, true);
    bool real_sym = true;
    for (std::size_t l = 0; l < w.size(); ++l) {
        if (w[l] == 0.0) continue;
        real_sym = real_sym && forcing[l].real_symmetric;
        // moving frame: weight * e^{-i t_l phi} f(t_l)
        for (std::size_t k = 0; k < acc.c.size(); ++k) {
            cplx rot(std::cos(times[l] * phi[k]), -std::sin(times[l] * phi[k]));
            acc.c[k] += w[l] * rot * forcing[l].c[k];
        }
    }
    rotate(acc, phi, t);
    acc.real_symmetric = real_sym;
    return acc;
}

SpectralField duhamel(const TrajectoryField& forcing, double t, DispersionSign s,
                      int M) {
    require(M >= 8, "duhamel: M must be >= 8");
    std::vector<SpectralField> spec;
    spec.reserve(forcing.nt());
    for (const auto& sl : forcing.slices) spec.push_back(forward_transform(sl));
    SpectralField out = duhamel(forcing.times, spec, t, s, M);
    // M must name the actual node count below t
    double h = forcing.times[1] - forcing.times[0];
    require(std::abs(t - M * h) <= 1e-9 * std::max(1.0, std::abs(t)),
            "duhamel: M does not match the forcing sampling for this t");
    return out;
}

std::vector<SpectralField> duhamel_all(const std::vector<double>& times,
                                       const std::vector<SpectralField>& forcing,
                                       DispersionSign s) {
    require(times.size() == forcing.size() && times.size() >= 4,
            "duhamel_all: need at least four forcing nodes");
    require(std::abs(times[0]) <= 1e-12, "duhamel_all: forcing must start at t=0");
    double h = uniform_step(times);
    const Grid2D& g = forcing[0].grid;
    auto phi = phase_table(g, s);

    std::vector<SpectralField> frame; // e^{-i t_l phi} f(t_l)
    frame.reserve(forcing.size());
    for (std::size_t l = 0; l < forcing.size(); ++l) {
        SpectralField f = forcing[l];
        rotate(f, phi, -times[l]);
        frame.push_back(std::move(f));
    }

    std::vector<SpectralField> out;
    out.reserve(times.size());
    out.emplace_back(g, true);
    for (std::size_t m = 1; m < times.size(); ++m) {
        auto w = prefix_weights(int(m), h);
        SpectralField acc(g, true);
        for (std::size_t l = 0; l < w.size(); ++l) {
            if (w[l] == 0.0) continue;
            for (std::size_t k = 0; k < acc.c.size(); ++k)
                acc.c[k] += w[l] * frame[l].c[k];
        }
        rotate(acc, phi, times[m]);
        out.push_back(std::move(acc));
    }
    return out;
}

TrajectoryField linear_trajectory(const SpectralField& F, double t0, double t1,
                                  int nt, DispersionSign s) {
    require(nt >= 1 && t1 > t0, "linear_trajectory: bad time range");
    auto phi = phase_table(F.grid, s);
    std::vector<double> times(std::size_t(nt) + 1);
    std::vector<PhysicalField> slices;
    slices.reserve(nt + 1);
    for (int m = 0; m <= nt; ++m) {
        times[m] = t0 + (t1 - t0) * m / nt;
        SpectralField G = F;
        rotate(G, phi, times[m]);
        slices.push_back(inverse_transform(G));
    }
    return make_trajectory(F.grid, std::move(times), std::move(slices));
}

std::pair<SpectralField, SpectralField> nonlinear_term(const SpectralField& w,
                                                       const SpectralField& v,
                                                       Nonlinearity kind) {
    require(w.grid == v.grid, "nonlinear_term: grid mismatch");
    require(q_complement_energy_fraction(w) <= 1e-12,
            "nonlinear_term: w must be Q-supported");
    require(q_energy_fraction(v) <= 1e-12,
            "nonlinear_term: v must be (Id-Q)-supported");
    SpectralField n = deriv_x(forcing_product(w + v, kind));
    return {project_Q(n), project_lowpass(n)};
}

namespace {

struct SpectralTraj {
    std::vector<double> times;
    std::vector<SpectralField> slices;
};

TrajectoryField to_physical(const Grid2D& g, const SpectralTraj& st) {
    std::vector<PhysicalField> phys;
    phys.reserve(st.slices.size());
    for (const auto& F : st.slices) phys.push_back(inverse_transform(F));
    return make_trajectory(g, st.times, std::move(phys));
}

} // namespace

PicardResult picard_solve(const PhysicalField& u0, const PicardConfig& cfg) {
    require(cfg.T > 0.0, "picard_solve: T must be positive");
    require(cfg.tol > 0.0, "picard_solve: tol must be positive");
    require(cfg.M >= 8, "picard_solve: M must be >= 8");
    require(cfg.max_iter >= 1, "picard_solve: max_iter must be >= 1");

    const Grid2D& g = u0.grid;
    SpectralField U0 = forward_transform(u0);
    project_zero_xmean(U0);
    SpectralField w0 = project_Q(U0);
    SpectralField v0 = project_lowpass(U0);

    auto phi = phase_table(g, cfg.sign);
    const int M = cfg.M;
    const double h = cfg.T / M;
    std::vector<double> times(std::size_t(M) + 1);
    for (int m = 0; m <= M; ++m) times[m] = m * h;

    // Linear iterate: w^0(t) = U(t) w0, v^0(t) = U(t) v0.
    SpectralTraj W{times, {}}, V{times, {}};
    W.slices.reserve(M + 1);
    V.slices.reserve(M + 1);
    for (int m = 0; m <= M; ++m) {
        SpectralField w = w0, v = v0;
        rotate(w, phi, times[m]);
        rotate(v, phi, times[m]);
        W.slices.push_back(std::move(w));
        V.slices.push_back(std::move(v));
    }

    const XNormParams prm = XNormParams::from_epsilon(cfg.epsilon);
    ContractionReport rep;
    double x_cur = x_norm_full(to_physical(g, W), prm).value;
    double y_cur = y_norm_set(to_physical(g, V), prm).value;
    const double initial_norm = std::max(x_cur, y_cur);
    rep.iterates.push_back({0, x_cur, y_cur, 0.0, 0.0});

    double prev_diff = 0.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        // Nonlinear forcing at every node, then one Duhamel sweep per component.
        std::vector<SpectralField> gq, gl; // moving-frame forcings
        gq.reserve(M + 1);
        gl.reserve(M + 1);
        for (int m = 0; m <= M; ++m) {
            auto [nq, nl] = nonlinear_term(W.slices[m], V.slices[m], cfg.nonlinearity);
            rotate(nq, phi, -times[m]);
            rotate(nl, phi, -times[m]);
            gq.push_back(std::move(nq));
            gl.push_back(std::move(nl));
        }

        SpectralTraj Wn{times, {}}, Vn{times, {}};
        Wn.slices.reserve(M + 1);
        Vn.slices.reserve(M + 1);
        for (int m = 0; m <= M; ++m) {
            SpectralField w = w0, v = v0;
            rotate(w, phi, times[m]);
            rotate(v, phi, times[m]);
            if (m >= 1 && cfg.beta != 0.0) {
                auto wq = prefix_weights(m, h);
                SpectralField iq(g), il(g);
                for (std::size_t l = 0; l < wq.size(); ++l) {
                    if (wq[l] == 0.0) continue;
                    for (std::size_t k = 0; k < iq.c.size(); ++k) {
                        iq.c[k] += wq[l] * gq[l].c[k];
                        il.c[k] += wq[l] * gl[l].c[k];
                    }
                }
                rotate(iq, phi, times[m]);
                rotate(il, phi, times[m]);
                for (std::size_t k = 0; k < w.c.size(); ++k) {
                    w.c[k] -= cfg.beta * iq.c[k];
                    v.c[k] -= cfg.beta * il.c[k];
                }
            }
            Wn.slices.push_back(std::move(w));
            Vn.slices.push_back(std::move(v));
        }

        // Split invariant: v stays low, w stays high.
        for (int m = 0; m <= M; ++m) {
            rep.max_split_leak = std::max(
                {rep.max_split_leak, q_complement_energy_fraction(Wn.slices[m]),
                 q_energy_fraction(Vn.slices[m])});
        }

        SpectralTraj Dw{times, {}}, Dv{times, {}};
        for (int m = 0; m <= M; ++m) {
            Dw.slices.push_back(Wn.slices[m] - W.slices[m]);
            Dv.slices.push_back(Vn.slices[m] - V.slices[m]);
        }
        double diff = std::max(x_norm_full(to_physical(g, Dw), prm).value,
                               y_norm_set(to_physical(g, Dv), prm).value);
        x_cur = x_norm_full(to_physical(g, Wn), prm).value;
        y_cur = y_norm_set(to_physical(g, Vn), prm).value;
        double ratio = prev_diff > 0.0 ? diff / prev_diff : 0.0;
        rep.iterates.push_back({it, x_cur, y_cur, diff, ratio});
        W = std::move(Wn);
        V = std::move(Vn);

        if (std::max(x_cur, y_cur) > 1e6 * std::max(initial_norm, 1e-300))
            throw DivergenceError("picard_solve: iterates grew past 1e6x the initial norm",
                                  rep.iterates);

        rep.iterations = it;
        rep.final_diff = diff;
        if (diff < cfg.tol * std::max({x_cur, y_cur, 1e-300})) {
            rep.converged = true;
            break;
        }
        prev_diff = diff;
    }

    SpectralTraj Usum{times, {}};
    for (int m = 0; m <= M; ++m) Usum.slices.push_back(W.slices[m] + V.slices[m]);
    return PicardResult{to_physical(g, Usum), std::move(rep)};
}

TrajectoryField reference_integrate(const PhysicalField& u0, double T, double dt,
                                    DispersionSign s, double beta,
                                    Nonlinearity kind, int sample_every) {
    require(T > 0.0 && dt > 0.0, "reference_integrate: T and dt must be positive");
    require(sample_every >= 1, "reference_integrate: sample_every must be >= 1");
    long steps = std::lround(T / dt);
    require(std::abs(steps * dt - T) <= 1e-9 * T,
            "reference_integrate: dt must divide T");

    const Grid2D& g = u0.grid;
    SpectralField U = forward_transform(u0);
    project_zero_xmean(U);
    auto phi = phase_table(g, s);

    auto nonlinear_slope = [&](const SpectralField& X) {
        SpectralField n = deriv_x(forcing_product(X, kind));
        for (auto& z : n.c) z *= -beta;
        return n;
    };
    auto rotated = [&](const SpectralField& X, double dtau) {
        SpectralField r = X;
        rotate(r, phi, dtau);
        return r;
    };
    auto axpy = [](const SpectralField& X, double a, const SpectralField& Y) {
        SpectralField r = X;
        for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] += a * Y.c[k];
        return r;
    };

    const double e0 = std::max(energy(U), 1e-300);
    std::vector<double> times{0.0};
    std::vector<PhysicalField> slices{inverse_transform(U)};

    for (long n = 0; n < steps; ++n) {
        SpectralField s1 = nonlinear_slope(U);
        if (beta != 0.0) {
            double inc = std::sqrt(energy(s1)) * dt;
            if (inc > 0.5 * std::sqrt(std::max(energy(U), 1e-300)) + 1e-12)
                throw std::runtime_error("reference_integrate: step size rejected");
        }
        SpectralField s2 = rotated(nonlinear_slope(rotated(axpy(U, 0.5 * dt, s1), 0.5 * dt)), -0.5 * dt);
        SpectralField s3 = rotated(nonlinear_slope(rotated(axpy(U, 0.5 * dt, s2), 0.5 * dt)), -0.5 * dt);
        SpectralField s4 = rotated(nonlinear_slope(rotated(axpy(U, dt, s3), dt)), -dt);
        for (std::size_t k = 0; k < U.c.size(); ++k)
            U.c[k] += dt / 6.0 * (s1.c[k] + 2.0 * s2.c[k] + 2.0 * s3.c[k] + s4.c[k]);
        rotate(U, phi, dt);

        double e = energy(U);
        if (!std::isfinite(e) || e > 1e12 * e0)
            throw std::runtime_error("reference_integrate: blow-up detected");
        if ((n + 1) % sample_every == 0 || n + 1 == steps) {
            times.push_back((n + 1) * dt);
            slices.push_back(inverse_transform(U));
        }
    }
    return make_trajectory(g, std::move(times), std::move(slices));
}

PhysicalField rescale_field(const PhysicalField& u, double rho) {
    require(rho > 0.0 && rho <= 1.0, "rescale_field: rho must be in (0, 1]");
    bool dyadic = false;
    for (int m = 0; m <= 60; ++m)
        if (rho == std::ldexp(1.0, -m)) {
            dyadic = true;
            break;
        }
    require(dyadic, "rescale_field: rho must be a dyadic 2^-m");
    if (rho == 1.0) return u;

    const Grid2D& g = u.grid;
    Grid2D gd = make_grid(g.Lx / rho, g.Ly / (rho * rho), g.Nx, g.Ny);
    SpectralField F = forward_transform(u);
    SpectralField R(gd, F.real_symmetric);
    // Amplitudes map index-to-index: xi'_m = rho xi_m, lambda'_n = rho^2 lambda_n.
    for (std::size_t k = 0; k < F.c.size(); ++k) R.c[k] = rho * rho * F.c[k];
    return inverse_transform(R);
}

namespace {

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(ly.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

} // namespace

std::vector<ScalingCheck> scaling_checks(const PhysicalField& u,
                                         const std::vector<double>& rhos) {
    struct Probe {
        std::string id;
        double target;
        std::function<double(const PhysicalField&)> norm;
    };
    auto dx_norm = [](double sigma) {
        return [sigma](const PhysicalField& f) {
            return l2_norm(frac_deriv(forward_transform(f), {Axis::x, sigma, FracKind::homogeneous}));
        };
    };
    auto dy_norm = [](double gamma) {
        return [gamma](const PhysicalField& f) {
            return l2_norm(frac_deriv(forward_transform(f), {Axis::y, gamma, FracKind::homogeneous}));
        };
    };
    const double alpha = 0.55, sig_w = 1.0;
    std::vector<Probe> probes = {
        {"l2", 0.5, [](const PhysicalField& f) { return l2_norm(f); }},
        {"dx_0.5", 1.0, dx_norm(0.5)},
        {"dx_1", 1.5, dx_norm(1.0)},
        {"dx_2", 2.5, dx_norm(2.0)},
        {"dy_0.5", 1.5, dy_norm(0.5)},
        {"dy_1", 2.5, dy_norm(1.0)},
        {"w_abs_y_dx_1", 0.5 + sig_w - 2.0 * alpha,
         [alpha](const PhysicalField& f) {
             SpectralField F = frac_deriv(forward_transform(f), {Axis::x, 1.0, FracKind::homogeneous});
             return l2_norm(weight_abs_y(inverse_transform(F), alpha));
         }},
    };

    std::vector<ScalingCheck> out;
    for (const auto& pr : probes) {
        std::vector<double> lx{0.0}, ly{std::log(pr.norm(u))};
        double base = std::exp(ly[0]);
        ScalingCheck chk{pr.id, pr.target, 0.0, 0.0};
        for (double rho : rhos) {
            PhysicalField ur = rescale_field(u, rho);
            double n = pr.norm(ur);
            lx.push_back(std::log(rho));
            ly.push_back(std::log(n));
            chk.max_ratio_dev = std::max(
                chk.max_ratio_dev, std::abs(n / (std::pow(rho, pr.target) * base) - 1.0));
        }
        chk.fitted = fit_slope(lx, ly);
        out.push_back(chk);
    }
    return out;
}

ResidualReport pde_residual(const TrajectoryField& traj, DispersionSign s,
                            double beta, Nonlinearity kind) {
    require(traj.nt() >= 3, "pde_residual: need at least three time slices");
    double h = uniform_step(traj.times);
    const Grid2D& g = traj.grid;
    auto phi = phase_table(g, s);

    std::vector<SpectralField> spec;
    spec.reserve(traj.nt());
    for (const auto& sl : traj.slices) spec.push_back(forward_transform(sl));

    ResidualReport rep;
    double scale = 0.0;
    for (const auto& F : spec) scale = std::max(scale, l2_norm(F));
    rep.scale = scale;

    for (std::size_t m = 1; m + 1 < traj.nt(); ++m) {
        SpectralField r(g, true);
        for (std::size_t k = 0; k < r.c.size(); ++k) {
            cplx dudt = (spec[m + 1].c[k] - spec[m - 1].c[k]) / (2.0 * h);
            r.c[k] = dudt - cplx(0.0, phi[k]) * spec[m].c[k];
        }
        if (beta != 0.0) {
            SpectralField n = deriv_x(forcing_product(spec[m], kind));
            for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] += beta * n.c[k];
        }
        rep.times.push_back(traj.times[m]);
        double rl2 = l2_norm(r);
        rep.residual_l2.push_back(rl2);
        rep.rel_residual = std::max(rep.rel_residual, rl2 / std::max(scale, 1e-300));
    }
    return rep;
}

std::vector<double> l2_series(const TrajectoryField& traj) {
    std::vector<double> out;
    out.reserve(traj.nt());
    for (const auto& s : traj.slices) out.push_back(l2_norm(s));
    return out;
}

} // namespace kpkit
