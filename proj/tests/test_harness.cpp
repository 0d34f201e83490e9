#include <doctest.h>

#include <cmath>

#include "kpkit/harness.hpp"
#include "kpkit/oned.hpp"

using namespace kpkit;

TEST_CASE("random fields: determinism, support, delta mode") {
    Grid2D g = make_grid(16.0, 16.0, 32, 32);
    SpectrumSpec sp;
    sp.seed = 77;
    PhysicalField a = random_field(sp, g);
    PhysicalField b = random_field(sp, g);
    for (std::size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == b.v[i]);

    sp.support = Support::q_only;
    SpectralField Q = random_spectrum(sp, g);
    CHECK(q_complement_energy_fraction(Q) == 0.0);
    sp.support = Support::lowfreq_only;
    SpectralField L = random_spectrum(sp, g);
    CHECK(q_energy_fraction(L) == 0.0);
    CHECK(energy(L) > 0.0);

    SpectrumSpec d;
    d.delta_mode = std::make_pair(3, 2);
    SpectralField D = random_spectrum(d, g);
    CHECK(std::abs(D.mode(3, 2) - cplx(0.5, 0.0)) == 0.0);
    double tot = energy(D);
    CHECK(tot == doctest::Approx(0.5).epsilon(1e-15)); // two modes of 1/4 each

    // refinement keeps the shared modes bit-identical
    Grid2D fine = make_grid(16.0, 16.0, 64, 64);
    SpectrumSpec sp2;
    sp2.seed = 78;
    SpectralField F0 = random_spectrum(sp2, g);
    SpectralField F1 = random_spectrum(sp2, fine);
    for (int m = -15; m <= 15; ++m)
        for (int n = -15; n <= 15; ++n) {
            if (m == 0 || m == -16 || n == -16) continue;
            CHECK(F0.mode(m, n) == F1.mode(m, n));
        }
}

TEST_CASE("ratio scale invariance") {
    EstimateConfig cfg;
    cfg.samples = 2;
    cfg.coarse_n = 32;
    cfg.time_samples = 16;
    auto rep = run_estimate_check("group-weighted", cfg);
    // both sides absolutely homogeneous: scaling the sample leaves ratios put
    for (const auto& r : rep.rows) {
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio >= 0.0);
    }
    auto rep2 = run_estimate_check("group-weighted", cfg);
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].ratio == rep2.rows[i].ratio); // bit-identical reruns
}

TEST_CASE("strichartz single-mode closed form matches the generic path") {
    Grid2D g = make_grid(16.0, 16.0, 64, 64);
    SpectrumSpec sp;
    sp.delta_mode = std::make_pair(5, 7); // harmonics stay off the zero mode
    SpectralField U0 = random_spectrum(sp, g);

    int nt = 64;
    TrajectoryField traj = linear_trajectory(U0, -1.0, 1.0, nt, DispersionSign::kp1);
    double lhs = mixed_norm(traj, {{Var::t, Var::x, Var::y}, {4.0, 4.0, 4.0}});

    // |cos|^4 averages to 3/8 exactly on the lattice, each time slice alike,
    // so LHS = (2T)^{1/4} (3/8 A)^{1/4} and RHS = sqrt(A/2).
    double A = g.area();
    double closed = std::pow(2.0, 0.25) * std::pow(0.375 * A, 0.25);
    CHECK(lhs == doctest::Approx(closed).epsilon(1e-10));
    double rhs = l2_norm(U0);
    CHECK(rhs == doctest::Approx(std::sqrt(A / 2.0)).epsilon(1e-12));
}

TEST_CASE("LHS/RHS ratios are scale invariant") {
    // group-weighted recipe computed by hand on F and 10F
    Grid2D g = make_grid(16.0, 16.0, 32, 32);
    SpectrumSpec sp;
    sp.seed = 202;
    sp.support = Support::q_only;
    SpectralField F = random_spectrum(sp, g);
    auto ratio_of = [&](const SpectralField& U0) {
        double lhs = 0.0;
        TrajectoryField traj = linear_trajectory(U0, -1.0, 1.0, 16, DispersionSign::kp1);
        for (const auto& s : traj.slices)
            lhs = std::max(lhs, l2_norm(weight_y(s, 0.55)));
        double rhs = l2_norm(weight_y(inverse_transform(U0), 0.55)) +
                     weighted_sobolev_norm(inverse_transform(U0), -0.55, 0.55, 0.0,
                                           false, false);
        return lhs / rhs;
    };
    double r1 = ratio_of(F);
    double r10 = ratio_of(10.0 * F);
    CHECK(std::abs(r10 - r1) <= 1e-12 * r1);
}

TEST_CASE("estimate reports are deterministic and structurally sound") {
    EstimateConfig cfg;
    cfg.samples = 3;
    cfg.coarse_n = 32;
    cfg.time_samples = 16;
    for (const std::string id : {"smoothing-plus", "maximal-x-low", "scaling"}) {
        auto rep = run_estimate_check(id, cfg);
        CHECK(rep.rows.size() == 6);
        CHECK(std::isfinite(rep.max_ratio_fine));
        CHECK(rep.max_ratio_fine > 0.0);
        for (const auto& r : rep.rows) CHECK(r.ratio >= 0.0);
    }
    CHECK_THROWS_AS(run_estimate_check("not-an-estimate", cfg), invalid_input);
}

TEST_CASE("leibniz defect: constant g gives an exact zero") {
    oned::Grid1D g{16.0, 256};
    oned::Field1D f = oned::random_field(g, 2.0, 11);
    oned::Field1D c(g.N, 3.7);
    auto ds = [&](const oned::Field1D& u) {
        return oned::inverse(g, oned::frac_deriv(g, oned::forward(g, u), 0.5, true));
    };
    oned::Field1D cf(g.N);
    for (int i = 0; i < g.N; ++i) cf[i] = c[i] * f[i];
    oned::Field1D lhs = ds(cf), df = ds(f), dc = ds(c);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i)
        worst = std::max(worst, std::abs(lhs[i] - c[i] * df[i] - f[i] * dc[i]));
    CHECK(worst <= 1e-12 * oned::linf_norm(df) * 3.7);
    CHECK(oned::linf_norm(dc) <= 1e-12); // D^sigma kills constants
}

TEST_CASE("leibniz defect: equal single modes match the closed form") {
    // f = g = cos(k x): defect = k^sigma [ (2^{sigma-1}-1) cos(2kx) - 1 ],
    // so ratio = sqrt(2) sqrt(1 + (2^{sigma-1}-1)^2 / 2).
    oned::Grid1D g{pi, 256};
    double sigma = 0.5;
    int mode = 3;
    double k = double(mode);
    oned::Field1D f(g.N);
    for (int i = 0; i < g.N; ++i) f[i] = std::cos(k * g.x(i));

    auto ds = [&](const oned::Field1D& u) {
        return oned::inverse(g, oned::frac_deriv(g, oned::forward(g, u), sigma, true));
    };
    oned::Field1D ff(g.N);
    for (int i = 0; i < g.N; ++i) ff[i] = f[i] * f[i];
    oned::Field1D dff = ds(ff), df = ds(f);
    oned::Field1D defect(g.N);
    for (int i = 0; i < g.N; ++i) defect[i] = dff[i] - 2.0 * f[i] * df[i];
    double ratio = oned::l2_norm(g, defect) / (oned::linf_norm(f) * oned::l2_norm(g, df));
    double c = std::pow(2.0, sigma - 1.0) - 1.0;
    double closed = std::sqrt(2.0) * std::sqrt(1.0 + 0.5 * c * c);
    CHECK(ratio == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("appendix ensembles stay bounded under refinement") {
    EstimateConfig cfg;
    cfg.samples = 8;
    for (const std::string id : {"frac-leibniz-1d", "weight-commutator-1d"}) {
        auto rep = run_estimate_check(id, cfg);
        CHECK(rep.pass);
        CHECK(rep.max_ratio_fine > 0.0);
    }
}
