#include "kpkit/harness.hpp"

#include <algorithm>
#include <cmath>

#include "kpkit/oned.hpp"
#include "kpkit/parallel.hpp"

namespace kpkit {

namespace {

struct SamplePair {
    double lhs = 0.0, rhs = 0.0;
    double ratio() const { return rhs == 0.0 ? 0.0 : lhs / rhs; }
};

struct Recipe {
    Support support = Support::full;
    int extra_fields = 0; // auxiliary same-support fields fed to eval
    std::function<SamplePair(const SpectralField&, const std::vector<SpectralField>&,
                             const EstimateConfig&)> eval;
    std::function<SamplePair(std::uint64_t seed, int n)> eval_1d;
};

double sup_t_l2_weighted(const SpectralField& U0, int nt, double alpha) {
    TrajectoryField traj = linear_trajectory(U0, -1.0, 1.0, nt, DispersionSign::kp1);
    double m = 0.0;
    for (const auto& s : traj.slices) m = std::max(m, l2_norm(weight_y(s, alpha)));
    return m;
}

double sobolev_rhs(const SpectralField& U0, double sigma, double gamma,
                   double alpha, bool dx_hom, bool dy_hom) {
    return weighted_sobolev_norm(inverse_transform(U0), sigma, gamma, alpha,
                                 dx_hom, dy_hom);
}

TrajectoryField weighted_traj(const TrajectoryField& traj, double alpha) {
    if (alpha == 0.0) return traj;
    TrajectoryField out;
    out.grid = traj.grid;
    out.times = traj.times;
    out.slices.reserve(traj.nt());
    for (const auto& s : traj.slices) out.slices.push_back(weight_y(s, alpha));
    return out;
}

Recipe make_recipe(const std::string& id) {
    Recipe r;
    if (id == "smoothing-plus") {
        r.support = Support::pplus_only;
        r.eval = [](const SpectralField& U0, const std::vector<SpectralField>&,
                    const EstimateConfig& cfg) {
            TrajectoryField traj = linear_trajectory(deriv_x(U0), -1.0, 1.0,
                                                     cfg.time_samples, DispersionSign::kp1);
            SamplePair s;
            s.lhs = mixed_norm(traj, {{Var::x, Var::t, Var::y}, {inf, 2.0, 2.0}});
            s.rhs = l2_norm(U0);
            return s;
        };
    } else if (id == "smoothing-minus") {
        r.support = Support::pminus_only;
        r.eval = [](const SpectralField& U0, const std::vector<SpectralField>&,
                    const EstimateConfig& cfg) {
            SpectralField G = frac_deriv(U0, {Axis::x, 0.5, FracKind::homogeneous});
            TrajectoryField traj =
                linear_trajectory(G, -1.0, 1.0, cfg.time_samples, DispersionSign::kp1);
            SamplePair s;
            s.lhs = mixed_norm(traj, {{Var::y, Var::t, Var::x}, {inf, 2.0, 2.0}});
            s.rhs = l2_norm(U0);
            return s;
        };
    } else if (id == "smoothing-inhomog") {
        r.support = Support::pminus_only;
        r.extra_fields = 2;
        r.eval = [](const SpectralField& U0, const std::vector<SpectralField>& extra,
                    const EstimateConfig& cfg) {
            const Grid2D& g = U0.grid;
            const int nt = cfg.time_samples;
            std::vector<double> times(std::size_t(nt) + 1);
            for (int m = 0; m <= nt; ++m) times[m] = double(m) / nt;
            const double omegas[3] = {0.0, 2.0, 5.0};
            std::vector<SpectralField> forcing;
            std::vector<PhysicalField> fphys;
            forcing.reserve(times.size());
            for (double t : times) {
                SpectralField f = U0;
                for (int i = 0; i < 2; ++i) {
                    double c = std::cos(omegas[i + 1] * t);
                    for (std::size_t k = 0; k < f.c.size(); ++k)
                        f.c[k] += c * extra[i].c[k];
                }
                fphys.push_back(inverse_transform(f));
                forcing.push_back(std::move(f));
            }
            auto integrals = duhamel_all(times, forcing, DispersionSign::kp1);
            std::vector<PhysicalField> slices;
            slices.reserve(integrals.size());
            for (auto& I : integrals) slices.push_back(inverse_transform(deriv_x(I)));
            TrajectoryField lhs_traj = make_trajectory(g, times, std::move(slices));
            TrajectoryField f_traj = make_trajectory(g, times, std::move(fphys));
            SamplePair s;
            s.lhs = mixed_norm(lhs_traj, {{Var::y, Var::t, Var::x}, {inf, 2.0, 2.0}});
            s.rhs = mixed_norm(f_traj, {{Var::y, Var::x, Var::t}, {1.0, 2.0, 2.0}});
            return s;
        };
    } else if (id == "maximal-x-high" || id == "maximal-y-high" ||
               id == "maximal-x-low" || id == "maximal-y-low" ||
               id == "weighted-maximal-x" || id == "weighted-maximal-low") {
        const bool low = id.find("low") != std::string::npos;
        const bool weighted = id.find("weighted") != std::string::npos;
        const bool x_outer = id == "maximal-y-high" || id == "maximal-y-low";
        r.support = low ? Support::lowfreq_only : Support::q_only;
        r.eval = [low, weighted, x_outer](const SpectralField& U0,
                                          const std::vector<SpectralField>&,
                                          const EstimateConfig& cfg) {
            const double e = cfg.epsilon;
            const double alpha = weighted ? 0.5 + e : 0.0;
            TrajectoryField traj =
                linear_trajectory(U0, -1.0, 1.0, cfg.time_samples, DispersionSign::kp1);
            SamplePair s;
            s.lhs = lattice_maximal_norm(
                traj, x_outer ? LatticeDir::x_outer : LatticeDir::y_outer, alpha);
            const double sig = 0.75 + e, gam = 0.5 + e, theta = 1.0 + e,
                         sig_low = 0.25 + e;
            if (!low && !weighted) {
                s.rhs = sobolev_rhs(U0, sig, gam, 0.0, false, false);
                if (x_outer) s.rhs += sobolev_rhs(U0, 0.0, theta, 0.0, true, false);
            } else if (low && !weighted) {
                s.rhs = x_outer ? sobolev_rhs(U0, -sig_low, theta, 0.0, true, false)
                                : sobolev_rhs(U0, -gam, gam, 0.0, true, false);
            } else if (!low) { // weighted-maximal-x
                s.rhs = sobolev_rhs(U0, sig, gam, alpha, false, false) +
                        sobolev_rhs(U0, sig - 0.5, gam + 0.5, 0.0, false, false);
            } else { // weighted-maximal-low
                s.rhs = sobolev_rhs(U0, -gam, gam, alpha, true, false) +
                        sobolev_rhs(U0, -theta, sig_low, 0.0, true, false);
            }
            return s;
        };
    } else if (id == "group-weighted" || id == "group-weighted-low") {
        const bool low = id == "group-weighted-low";
        r.support = low ? Support::lowfreq_only : Support::q_only;
        r.eval = [low](const SpectralField& U0, const std::vector<SpectralField>&,
                       const EstimateConfig& cfg) {
            const double e = cfg.epsilon, alpha = 0.5 + e;
            SamplePair s;
            s.lhs = sup_t_l2_weighted(U0, cfg.time_samples, alpha);
            PhysicalField u = inverse_transform(U0);
            if (!low)
                s.rhs = l2_norm(weight_y(u, alpha)) +
                        sobolev_rhs(U0, -alpha, alpha, 0.0, false, false);
            else
                s.rhs = l2_norm(weight_y(u, alpha)) +
                        sobolev_rhs(U0, -(alpha + e), alpha, 0.0, true, false);
            return s;
        };
    } else if (id == "strichartz") {
        r.support = Support::full;
        r.eval = [](const SpectralField& U0, const std::vector<SpectralField>&,
                    const EstimateConfig& cfg) {
            TrajectoryField traj =
                linear_trajectory(U0, -1.0, 1.0, cfg.time_samples, DispersionSign::kp1);
            SamplePair s;
            s.rhs = l2_norm(U0);
            for (auto [q, p] : {std::pair<double, double>{4.0, 4.0}, {8.0 / 3.0, 8.0}}) {
                double lhs = mixed_norm(traj, {{Var::t, Var::x, Var::y}, {q, p, p}});
                s.lhs = std::max(s.lhs, lhs);
            }
            return s;
        };
    } else if (id == "weighted-Linfty") {
        r.support = Support::q_only; // odd samples switch to the low variant
        r.eval = [](const SpectralField& U0, const std::vector<SpectralField>&,
                    const EstimateConfig& cfg) {
            const double e = cfg.epsilon, alpha = 0.5 + e;
            bool low = q_complement_energy_fraction(U0) > 0.5;
            TrajectoryField traj =
                linear_trajectory(U0, 0.0, 1.0, cfg.time_samples, DispersionSign::kp1);
            SamplePair s;
            s.lhs = mixed_norm(weighted_traj(traj, alpha),
                               {{Var::t, Var::x, Var::y}, {2.0, inf, inf}});
            if (!low) {
                SpectralField G = apply_multiplier(U0, [e](double xi, double lam) {
                    return cplx(std::pow(1.0 + std::abs(xi), e) +
                                    std::pow(1.0 + std::abs(lam), e),
                                0.0);
                });
                s.rhs = l2_norm(weight_y(inverse_transform(G), alpha)) +
                        sobolev_rhs(U0, 0.0, alpha + e, 0.0, true, false);
            } else {
                s.rhs = sobolev_rhs(U0, 0.0, e, alpha, true, false) +
                        sobolev_rhs(U0, -(alpha + e), alpha + 2.0 * e, 0.0, true, false);
            }
            return s;
        };
    } else if (id == "scaling") {
        r.support = Support::full;
        r.eval = [](const SpectralField& U0, const std::vector<SpectralField>&,
                    const EstimateConfig&) {
            PhysicalField u = inverse_transform(U0);
            auto checks = scaling_checks(u, {0.5, 0.25, 0.125, 0.0625});
            SamplePair s;
            s.rhs = 1.0;
            for (const auto& c : checks) s.lhs = std::max(s.lhs, 1.0 + c.max_ratio_dev);
            return s;
        };
    } else if (id == "frac-leibniz-1d") {
        r.eval_1d = [](std::uint64_t seed, int n) {
            SamplePair s;
            s.lhs = leibniz_defect_ratio(n, 16.0, 0.5, seed);
            s.rhs = 1.0;
            return s;
        };
    } else if (id == "weight-commutator-1d") {
        r.eval_1d = [](std::uint64_t seed, int n) {
            SamplePair s;
            s.lhs = weight_commutator_ratio(n, 16.0, 0.55, 0.5, seed);
            s.rhs = 1.0;
            return s;
        };
    } else {
        throw invalid_input("unknown estimate id: " + id);
    }
    return r;
}

void assert_support(const SpectralField& F, Support sup) {
    auto keep = [sup](double xi, double lam) {
        switch (sup) {
            case Support::q_only: return std::abs(xi) >= 1.0;
            case Support::lowfreq_only: return std::abs(xi) < 1.0;
            case Support::pplus_only:
                return std::abs(xi) >= 1.0 && xi * xi >= std::abs(lam);
            case Support::pminus_only:
                return std::abs(xi) >= 1.0 && xi * xi < std::abs(lam);
            default: return true;
        }
    };
    require(support_violation(F, keep) <= 1e-12,
            "estimate harness: ensemble violates the stated support");
}

} // namespace

const std::vector<std::string>& estimate_catalog() {
    static const std::vector<std::string> ids = {
        "smoothing-plus",     "smoothing-minus",    "smoothing-inhomog",
        "maximal-x-high",     "maximal-y-high",     "maximal-x-low",
        "maximal-y-low",      "weighted-maximal-x", "weighted-maximal-low",
        "group-weighted",     "group-weighted-low", "strichartz",
        "weighted-Linfty",    "scaling",            "frac-leibniz-1d",
        "weight-commutator-1d"};
    return ids;
}

EstimateReport run_estimate_check(const std::string& id, const EstimateConfig& cfg) {
    require(cfg.samples >= 1, "run_estimate_check: need at least one sample");
    Recipe recipe = make_recipe(id);
    EstimateReport rep;
    rep.id = id;
    rep.rows.assign(std::size_t(cfg.samples) * 2, SampleRatio{});

    if (recipe.eval_1d) {
        parallel_for(std::size_t(cfg.samples), cfg.threads, [&](std::size_t i) {
            std::uint64_t seed = derive_seed(cfg.seed, id, i);
            for (int fine = 0; fine < 2; ++fine) {
                int n = fine ? 512 : 256;
                SamplePair s = recipe.eval_1d(seed, n);
                rep.rows[std::size_t(fine) * cfg.samples + i] =
                    {int(i), seed, n, s.lhs, s.rhs, s.ratio()};
            }
        });
    } else {
        Grid2D coarse = make_grid(cfg.Lx, cfg.Ly, cfg.coarse_n, cfg.coarse_n);
        Grid2D fine = make_grid(cfg.Lx, cfg.Ly, 2 * cfg.coarse_n, 2 * cfg.coarse_n);
        parallel_for(std::size_t(cfg.samples), cfg.threads, [&](std::size_t i) {
            std::uint64_t seed = derive_seed(cfg.seed, id, i);
            SpectrumSpec sp;
            auto prof = cfg.decay_profiles[i % cfg.decay_profiles.size()];
            sp.a = prof.first;
            sp.b = prof.second;
            sp.seed = seed;
            sp.support = recipe.support;
            if (id == "weighted-Linfty" && (i % 2 == 1))
                sp.support = Support::lowfreq_only;
            SpectralField F0 = random_spectrum(sp, coarse);
            assert_support(F0, sp.support);
            std::vector<SpectralField> extra0, extra1;
            for (int x = 0; x < recipe.extra_fields; ++x) {
                SpectrumSpec se = sp;
                se.seed = derive_seed(seed, "extra", x);
                extra0.push_back(random_spectrum(se, coarse));
                extra1.push_back(embed(extra0.back(), fine));
            }
            SpectralField F1 = embed(F0, fine);
            SamplePair c = recipe.eval(F0, extra0, cfg);
            SamplePair f = recipe.eval(F1, extra1, cfg);
            rep.rows[i] = {int(i), seed, coarse.Nx, c.lhs, c.rhs, c.ratio()};
            rep.rows[std::size_t(cfg.samples) + i] = {int(i), seed, fine.Nx,
                                                      f.lhs, f.rhs, f.ratio()};
        });
    }

    std::vector<double> fine_ratios;
    for (int i = 0; i < cfg.samples; ++i) {
        double rc = rep.rows[i].ratio;
        double rf = rep.rows[std::size_t(cfg.samples) + i].ratio;
        rep.max_ratio_coarse = std::max(rep.max_ratio_coarse, rc);
        rep.max_ratio_fine = std::max(rep.max_ratio_fine, rf);
        fine_ratios.push_back(rf);
        if (rc > 0.0 && std::abs(rf - rc) > 0.2 * rc) rep.resolved = false;
        if (!std::isfinite(rc) || !std::isfinite(rf)) rep.resolved = false;
    }
    std::sort(fine_ratios.begin(), fine_ratios.end());
    rep.median_ratio = fine_ratios[fine_ratios.size() / 2];
    rep.growth = rep.max_ratio_coarse > 0.0
                     ? rep.max_ratio_fine / rep.max_ratio_coarse - 1.0
                     : 0.0;
    rep.pass = std::isfinite(rep.max_ratio_fine) &&
               std::isfinite(rep.max_ratio_coarse) && rep.growth < 0.2;
    return rep;
}

SweepSummary run_all_estimates(const EstimateConfig& cfg,
                               const std::vector<std::string>& ids) {
    const auto& all = ids.empty() ? estimate_catalog() : ids;
    for (const auto& id : all)
        if (std::find(estimate_catalog().begin(), estimate_catalog().end(), id) ==
            estimate_catalog().end())
            throw invalid_input("unknown estimate id: " + id);
    SweepSummary out;
    out.all_pass = true;
    for (const auto& id : all) {
        out.reports.push_back(run_estimate_check(id, cfg));
        out.all_pass = out.all_pass && out.reports.back().pass;
    }
    return out;
}

double leibniz_defect_ratio(int n, double L, double sigma, std::uint64_t seed) {
    require(sigma > 0.0 && sigma < 1.0, "leibniz: sigma must be in (0, 1)");
    oned::Grid1D g{L, n};
    oned::Field1D f = oned::random_field(g, 2.0, derive_seed(seed, "f", 0));
    oned::Field1D h = oned::random_field(g, 2.0, derive_seed(seed, "g", 0));

    auto ds = [&](const oned::Field1D& u) {
        return oned::inverse(g, oned::frac_deriv(g, oned::forward(g, u), sigma, true));
    };
    oned::Field1D fg(g.N);
    for (int i = 0; i < g.N; ++i) fg[i] = f[i] * h[i];
    oned::Field1D dfg = ds(fg), df = ds(f), dh = ds(h);
    oned::Field1D defect(g.N);
    for (int i = 0; i < g.N; ++i)
        defect[i] = dfg[i] - f[i] * dh[i] - h[i] * df[i];
    double denom = oned::linf_norm(h) * oned::l2_norm(g, df);
    return denom == 0.0 ? 0.0 : oned::l2_norm(g, defect) / denom;
}

double weight_commutator_ratio(int n, double L, double alpha, double gamma,
                               std::uint64_t seed) {
    require(alpha >= 0.0 && alpha <= 1.0 && gamma > 0.0 && gamma < 1.0,
            "weight commutator: alpha in [0,1], gamma in (0,1)");
    oned::Grid1D g{L, n};
    oned::Field1D f = oned::random_field(g, 2.5, derive_seed(seed, "wc", 0));
    auto dgam = [&](const oned::Field1D& u) {
        return oned::inverse(g, oned::frac_deriv(g, oned::forward(g, u), gamma, false));
    };
    oned::Field1D a = oned::weight(g, dgam(f), alpha);
    oned::Field1D b = dgam(oned::weight(g, f, alpha));
    oned::Field1D comm(g.N);
    for (int i = 0; i < g.N; ++i) comm[i] = a[i] - b[i];
    double denom = oned::l2_norm(g, oned::weight(g, f, alpha));
    return denom == 0.0 ? 0.0 : oned::l2_norm(g, comm) / denom;
}

} // namespace kpkit
