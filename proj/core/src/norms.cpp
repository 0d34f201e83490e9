#include "kpkit/norms.hpp"

#include <algorithm>
#include <cmath>

namespace kpkit {

TrajectoryField make_trajectory(const Grid2D& g, std::vector<double> times,
                                std::vector<PhysicalField> slices) {
    require(!times.empty() && times.size() == slices.size(),
            "make_trajectory: times/slices mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        require(times[i] > times[i - 1], "make_trajectory: times must increase");
    for (const auto& s : slices)
        require(s.grid == g, "make_trajectory: slice grid mismatch");
    return TrajectoryField{g, std::move(times), std::move(slices)};
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    std::vector<double> w(t.size(), 1.0);
    if (t.size() < 2) return w;
    w.front() = 0.5 * (t[1] - t[0]);
    w.back() = 0.5 * (t[t.size() - 1] - t[t.size() - 2]);
    for (std::size_t i = 1; i + 1 < t.size(); ++i) w[i] = 0.5 * (t[i + 1] - t[i - 1]);
    return w;
}

struct Reducer {
    double p;
    double acc = 0.0;
    void add(double v, double w) {
        if (p == inf)
            acc = std::max(acc, std::abs(v));
        else
            acc += w * std::pow(std::abs(v), p);
    }
    double finish() const { return p == inf ? acc : std::pow(acc, 1.0 / p); }
};

} // namespace

double mixed_norm(const TrajectoryField& traj, const MixedSpec& spec) {
    bool seen_t = false, seen_x = false, seen_y = false;
    for (Var v : spec.order) {
        if (v == Var::t) seen_t = true;
        if (v == Var::x) seen_x = true;
        if (v == Var::y) seen_y = true;
    }
    require(seen_t && seen_x && seen_y,
            "mixed_norm: order must be a permutation of (t, x, y)");
    for (double e : spec.exps)
        require(e >= 1.0, "mixed_norm: exponents must be >= 1 or inf");

    const Grid2D& g = traj.grid;
    const auto tw = trapezoid_weights(traj.times);
    auto extent = [&](Var v) -> int {
        switch (v) {
            case Var::t: return int(traj.nt());
            case Var::x: return g.Nx;
            default: return g.Ny;
        }
    };
    auto weight = [&](Var v, int i) -> double {
        switch (v) {
            case Var::t: return tw[i];
            case Var::x: return g.dx();
            default: return g.dy();
        }
    };

    const Var v0 = spec.order[0], v1 = spec.order[1], v2 = spec.order[2];
    int it = 0, ix = 0, iy = 0;
    auto bind = [&](Var v) -> int* {
        switch (v) {
            case Var::t: return &it;
            case Var::x: return &ix;
            default: return &iy;
        }
    };
    int* oi = bind(v0);
    int* mi = bind(v1);
    int* ii = bind(v2);

    Reducer outer{spec.exps[0]};
    for (*oi = 0; *oi < extent(v0); ++*oi) {
        Reducer mid{spec.exps[1]};
        for (*mi = 0; *mi < extent(v1); ++*mi) {
            Reducer inner{spec.exps[2]};
            for (*ii = 0; *ii < extent(v2); ++*ii)
                inner.add(traj.slices[it].at(ix, iy), weight(v2, *ii));
            mid.add(inner.finish(), weight(v1, *mi));
        }
        outer.add(mid.finish(), weight(v0, *oi));
    }
    return outer.finish();
}

double weighted_sobolev_norm(const PhysicalField& f, double sigma, double gamma,
                             double alpha, bool dotted_x, bool dotted_y) {
    SpectralField F = forward_transform(f);
    if (sigma != 0.0 || dotted_x)
        F = frac_deriv(F, {Axis::x, sigma,
                           dotted_x ? FracKind::homogeneous : FracKind::inhomogeneous});
    if (gamma != 0.0 || dotted_y)
        F = frac_deriv(F, {Axis::y, gamma,
                           dotted_y ? FracKind::homogeneous : FracKind::inhomogeneous});
    PhysicalField d = inverse_transform(F);
    if (alpha != 0.0) d = weight_y(d, alpha);
    return l2_norm(d);
}

double h2_norm(const PhysicalField& f) {
    SpectralField F = forward_transform(f);
    auto norm_of = [&](auto&& m) {
        return l2_norm(apply_multiplier(F, m));
    };
    double base = l2_norm(F);
    double ddx = norm_of([](double xi, double) { return cplx(xi * xi, 0.0); });
    double ddy = norm_of([](double, double lam) { return cplx(lam * lam, 0.0); });
    return base + ddx + ddy;
}

namespace {

double weighted_l2_of(const SpectralField& F, double alpha) {
    if (alpha == 0.0) return l2_norm(F);
    return l2_norm(weight_y(inverse_transform(F), alpha));
}

} // namespace

Z0Result z0_norm(const PhysicalField& f, double eps) {
    require(eps > 0.0, "z0_norm: eps must be positive");
    SpectralField F = forward_transform(f);
    require(zero_xmean_energy_fraction(F) <= 1e-13,
            "z0_norm: field must have zero x-mean per lambda");
    project_zero_xmean(F); // drop roundoff on the xi=0 column

    const double alpha = 0.5 + eps;
    const double s0 = 0.5 + eps, s1 = 0.25 + eps, s2 = 0.75 + eps;
    const double s3 = 0.75 + eps, s4 = 1.0 + eps;
    const double g0 = 0.5 + eps, g1 = 1.0 + eps, g2 = 1.5 + eps;
    const double g3 = 0.5 + eps, g4 = 1.0 + eps;

    SpectralField lo = project_lowpass(F);
    SpectralField hi = project_Q(F);

    auto chain = [&](const SpectralField& G, double sx, FracKind kx, double gy,
                     double w) {
        SpectralField H = frac_deriv(G, {Axis::x, sx, kx});
        H = frac_deriv(H, {Axis::y, gy, FracKind::inhomogeneous});
        return weighted_l2_of(H, w);
    };

    Z0Result r;
    r.components[0] = h2_norm(f);
    r.components[1] = chain(lo, -s0, FracKind::homogeneous, g0, alpha);
    r.components[2] = chain(lo, -s1, FracKind::homogeneous, g1, alpha);
    r.components[3] = chain(lo, -s2, FracKind::homogeneous, g2, 0.0);
    r.components[4] = chain(hi, s3, FracKind::inhomogeneous, g3, alpha);
    r.components[5] = chain(hi, 0.0, FracKind::inhomogeneous, g4, alpha);
    SpectralField h7 = frac_deriv(hi, {Axis::x, s4, FracKind::inhomogeneous});
    r.components[6] = weighted_l2_of(h7, alpha);
    for (double c : r.components) r.total += c;
    return r;
}

XNormParams XNormParams::from_epsilon(double eps) {
    require(eps > 0.0, "XNormParams: eps must be positive");
    return XNormParams{0.75 + eps, 0.5 + eps, 1.0 + eps, 1.0 + eps, 0.5 + eps};
}

namespace {

TrajectoryField transform_traj(const TrajectoryField& traj,
                               const std::function<SpectralField(const SpectralField&)>& op,
                               double weight_alpha) {
    TrajectoryField out;
    out.grid = traj.grid;
    out.times = traj.times;
    out.slices.reserve(traj.nt());
    for (const auto& s : traj.slices) {
        PhysicalField p = inverse_transform(op(forward_transform(s)));
        if (weight_alpha != 0.0) p = weight_y(p, weight_alpha);
        out.slices.push_back(std::move(p));
    }
    return out;
}

double sup_t_norm(const TrajectoryField& traj,
                  const std::function<double(const PhysicalField&)>& norm) {
    double m = 0.0;
    for (const auto& s : traj.slices) m = std::max(m, norm(s));
    return m;
}

void require_q_supported(const TrajectoryField& traj, const char* what) {
    for (const auto& s : traj.slices)
        require(q_complement_energy_fraction(forward_transform(s)) <= 1e-12, what);
}

} // namespace

double x_norm(const TrajectoryField& traj, int i, const XNormParams& prm) {
    require(i >= 1 && i <= 12, "x_norm: index must be in 1..12");
    const double s1 = prm.sigma1, g1 = prm.gamma1, s2 = prm.sigma2,
                 g2 = prm.gamma2, a = prm.alpha;

    auto inhx = [](double s) {
        return [s](double xi, double) { return cplx(std::pow(1.0 + std::abs(xi), s), 0.0); };
    };
    auto inhy = [](double gma) {
        return [gma](double, double lam) { return cplx(std::pow(1.0 + std::abs(lam), gma), 0.0); };
    };

    switch (i) {
        case 1:
            return sup_t_norm(traj, h2_norm);
        case 2:
            return sup_t_norm(traj, [&](const PhysicalField& f) {
                return weighted_sobolev_norm(f, s1, g1, a, false, false);
            });
        case 3:
            return sup_t_norm(traj, [&](const PhysicalField& f) {
                return weighted_sobolev_norm(f, 0.0, g2, a, true, false);
            });
        case 4:
            return sup_t_norm(traj, [&](const PhysicalField& f) {
                return weighted_sobolev_norm(f, s2, 0.0, a, false, true);
            });
        case 5: {
            require_q_supported(traj, "x_norm: norm 5 needs a Q-supported trajectory");
            auto op = [](const SpectralField& F) {
                SpectralField G = apply_multiplier(F, [](double xi, double lam) {
                    return cplx(0.0, xi) * (xi * xi + lam * lam);
                });
                return project_Pplus(G);
            };
            return mixed_norm(transform_traj(traj, op, 0.0),
                              {{Var::x, Var::t, Var::y}, {inf, 2.0, 2.0}});
        }
        case 6: {
            require_q_supported(traj, "x_norm: norm 6 needs a Q-supported trajectory");
            auto op = [&](const SpectralField& F) {
                SpectralField G = deriv_x(F);
                G = apply_multiplier(G, inhx(s1));
                G = apply_multiplier(G, inhy(g1));
                return project_Pplus(G);
            };
            return mixed_norm(transform_traj(traj, op, 0.0),
                              {{Var::x, Var::t, Var::y}, {inf, 2.0, 2.0}});
        }
        case 7: {
            require_q_supported(traj, "x_norm: norm 7 needs a Q-supported trajectory");
            auto op = [](const SpectralField& F) {
                SpectralField G = apply_multiplier(F, [](double xi, double lam) {
                    return cplx(0.0, xi) * (xi * xi + lam * lam);
                });
                return project_Pminus(G);
            };
            return mixed_norm(transform_traj(traj, op, 0.0),
                              {{Var::y, Var::t, Var::x}, {inf, 2.0, 2.0}});
        }
        case 8: {
            require_q_supported(traj, "x_norm: norm 8 needs a Q-supported trajectory");
            auto op = [&](const SpectralField& F) {
                SpectralField G = deriv_x(F);
                G = apply_multiplier(G, inhx(s1));
                G = apply_multiplier(G, inhy(g1));
                return project_Pminus(G);
            };
            return mixed_norm(transform_traj(traj, op, 0.0),
                              {{Var::y, Var::t, Var::x}, {inf, 2.0, 2.0}});
        }
        case 9: {
            auto id = [](const SpectralField& F) { return F; };
            return mixed_norm(transform_traj(traj, id, a),
                              {{Var::y, Var::x, Var::t}, {2.0, inf, inf}});
        }
        case 10: {
            auto id = [](const SpectralField& F) { return F; };
            return mixed_norm(transform_traj(traj, id, a),
                              {{Var::x, Var::y, Var::t}, {2.0, inf, inf}});
        }
        case 11:
            return mixed_norm(transform_traj(traj, deriv_y, a),
                              {{Var::t, Var::x, Var::y}, {2.0, inf, inf}});
        case 12:
            return mixed_norm(transform_traj(traj, deriv_x, a),
                              {{Var::t, Var::x, Var::y}, {2.0, inf, inf}});
        default:
            return 0.0;
    }
}

NormBreakdown x_norm_full(const TrajectoryField& traj, const XNormParams& prm) {
    NormBreakdown b;
    for (int i = 1; i <= 12; ++i) {
        double v = x_norm(traj, i, prm);
        b.components.emplace_back("i=" + std::to_string(i), v);
        b.value = std::max(b.value, v);
    }
    return b;
}

NormBreakdown y_norm_set(const TrajectoryField& traj, const XNormParams& prm) {
    for (const auto& s : traj.slices)
        require(q_energy_fraction(forward_transform(s)) <= 1e-12,
                "y_norm_set: trajectory must be (Id-Q)-supported");
    NormBreakdown b;
    for (int i : {1, 3, 9, 10, 11, 12}) {
        double v = x_norm(traj, i, prm);
        b.components.emplace_back("i=" + std::to_string(i), v);
        b.value = std::max(b.value, v);
    }
    return b;
}

NormBreakdown x0_norm(const PhysicalField& f, const XNormParams& prm) {
    PhysicalField g = inverse_transform(project_Q(forward_transform(f)));
    NormBreakdown b;
    auto push = [&](const std::string& name, double v) {
        b.components.emplace_back(name, v);
        b.value = std::max(b.value, v);
    };
    push("i=1", h2_norm(g));
    push("i=2", weighted_sobolev_norm(g, prm.sigma1, prm.gamma1, prm.alpha, false, false));
    push("i=3", weighted_sobolev_norm(g, 0.0, prm.gamma2, prm.alpha, true, false));
    push("i=4", weighted_sobolev_norm(g, prm.sigma2, 0.0, prm.alpha, false, true));
    return b;
}

NormBreakdown y0_norm(const PhysicalField& f, double eps) {
    require(eps > 0.0, "y0_norm: eps must be positive");
    SpectralField G = project_lowpass(forward_transform(f));
    project_zero_xmean(G);
    const double a = 0.5 + eps;
    NormBreakdown b;
    auto chain = [&](double sx, double gy, double alpha) {
        SpectralField H = frac_deriv(G, {Axis::x, sx, FracKind::homogeneous});
        H = frac_deriv(H, {Axis::y, gy, FracKind::homogeneous});
        return weighted_l2_of(H, alpha);
    };
    auto push = [&](const std::string& name, double v) {
        b.components.emplace_back(name, v);
        b.value = std::max(b.value, v);
    };
    push("l2", l2_norm(G));
    push("w_dxm14_dy1", chain(-(0.25 + eps), 1.0 + eps, a));
    push("w_dxm12_dy12", chain(-(0.5 + eps), 0.5 + eps, a));
    push("dxm34_dy32", chain(-(0.75 + eps), 1.5 + eps, 0.0));
    return b;
}

NormRecord evaluate_norm(const NormSpec& spec, const TrajectoryField& traj) {
    require(!traj.slices.empty(), "evaluate_norm: empty trajectory");
    const PhysicalField& f0 = traj.slices.front();
    NormRecord rec;
    switch (spec.kind) {
        case NormSpec::Kind::mixed_lebesgue: {
            rec.id = "mixed_lebesgue";
            const char* names[3] = {"outer", "mid", "inner"};
            for (int d = 0; d < 3; ++d)
                rec.params.emplace_back(names[d], spec.mixed.exps[d]);
            rec.value = mixed_norm(traj, spec.mixed);
            break;
        }
        case NormSpec::Kind::weighted_sobolev:
            rec.id = "weighted_sobolev";
            rec.params = {{"sigma", spec.sigma}, {"gamma", spec.gamma},
                          {"alpha", spec.alpha},
                          {"dotted_x", spec.dotted_x ? 1.0 : 0.0},
                          {"dotted_y", spec.dotted_y ? 1.0 : 0.0}};
            rec.value = weighted_sobolev_norm(f0, spec.sigma, spec.gamma, spec.alpha,
                                              spec.dotted_x, spec.dotted_y);
            break;
        case NormSpec::Kind::z0: {
            rec.id = "z0";
            rec.params = {{"epsilon", spec.eps}};
            Z0Result r = z0_norm(f0, spec.eps);
            rec.value = r.total;
            for (std::size_t c = 0; c < r.components.size(); ++c)
                rec.components.emplace_back("c" + std::to_string(c), r.components[c]);
            break;
        }
        case NormSpec::Kind::x_i:
            rec.id = "x_" + std::to_string(spec.i);
            rec.params = {{"epsilon", spec.eps}, {"i", double(spec.i)}};
            rec.value = x_norm(traj, spec.i, XNormParams::from_epsilon(spec.eps));
            break;
        case NormSpec::Kind::y_set: {
            rec.id = "y_set";
            rec.params = {{"epsilon", spec.eps}};
            NormBreakdown b = y_norm_set(traj, XNormParams::from_epsilon(spec.eps));
            rec.value = b.value;
            rec.components = b.components;
            break;
        }
        case NormSpec::Kind::x0: {
            rec.id = "x0";
            rec.params = {{"epsilon", spec.eps}};
            NormBreakdown b = x0_norm(f0, XNormParams::from_epsilon(spec.eps));
            rec.value = b.value;
            rec.components = b.components;
            break;
        }
        case NormSpec::Kind::y0: {
            rec.id = "y0";
            rec.params = {{"epsilon", spec.eps}};
            NormBreakdown b = y0_norm(f0, spec.eps);
            rec.value = b.value;
            rec.components = b.components;
            break;
        }
        case NormSpec::Kind::lattice_maximal:
            rec.id = "lattice_maximal";
            rec.params = {{"weight_alpha", spec.weight_alpha},
                          {"x_outer", spec.dir == LatticeDir::x_outer ? 1.0 : 0.0}};
            rec.value = lattice_maximal_norm(traj, spec.dir, spec.weight_alpha);
            break;
    }
    return rec;
}

double lattice_maximal_norm(const TrajectoryField& traj, LatticeDir dir,
                            double weight_alpha) {
    const Grid2D& g = traj.grid;
    double Louter = dir == LatticeDir::y_outer ? g.Ly : g.Lx;
    require(Louter >= 4.0,
            "lattice_maximal_norm: outer half-length must be >= 4");

    int s_lo = int(std::floor(-Louter));
    int s_hi = int(std::ceil(Louter)) - 1;
    std::vector<double> cell_sup(std::size_t(s_hi - s_lo + 1), 0.0);

    for (std::size_t ti = 0; ti < traj.nt(); ++ti) {
        const PhysicalField& u = traj.slices[ti];
        for (int j = 0; j < g.Ny; ++j) {
            double y = g.y(j);
            double w = weight_alpha == 0.0
                           ? 1.0
                           : std::pow(1.0 + y * y, 0.5 * weight_alpha);
            for (int i = 0; i < g.Nx; ++i) {
                double outer = dir == LatticeDir::y_outer ? y : g.x(i);
                int cell = int(std::floor(outer)) - s_lo;
                double v = std::abs(w * u.at(i, j));
                if (v > cell_sup[cell]) cell_sup[cell] = v;
            }
        }
    }
    double s = 0.0;
    for (double c : cell_sup) s += c * c;
    return std::sqrt(s);
}

} // namespace kpkit
