#include <doctest.h>

#include <cmath>

#include "kpkit/evolution.hpp"
#include "kpkit/harness.hpp"
#include "kpkit/random_field.hpp"

using namespace kpkit;

namespace {

PhysicalField cos_mode(const Grid2D& g, int m, int n) {
    SpectralField F(g);
    F.mode(m, n) = 0.5;
    F.mode(-m, -n) = 0.5;
    return inverse_transform(F);
}

PhysicalField small_data(const Grid2D& g, double z0_scale, std::uint64_t seed) {
    SpectrumSpec sp;
    sp.a = 8.0;
    sp.b = 8.0;
    sp.seed = seed;
    PhysicalField u = random_field(sp, g);
    double z0 = z0_norm(u, 0.05).total;
    return (z0_scale / z0) * u;
}

} // namespace

TEST_CASE("propagate: identity at t = 0 and single-mode phase speed") {
    Grid2D g = make_grid(pi, pi, 32, 32);
    SpectralField F = forward_transform(cos_mode(g, 1, 1));
    SpectralField F0 = propagate(F, 0.0, DispersionSign::kp1);
    for (std::size_t k = 0; k < F.c.size(); ++k) CHECK(F0.c[k] == F.c[k]);

    for (double t : {0.1, 1.0}) {
        PhysicalField ut = inverse_transform(propagate(F, t, DispersionSign::kp1));
        double worst = 0.0;
        for (int i = 0; i < g.Nx; ++i)
            for (int j = 0; j < g.Ny; ++j)
                worst = std::max(worst, std::abs(ut.at(i, j) -
                                                 std::cos(g.x(i) + g.y(j) + 2.0 * t)));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("duhamel quadrature") {
    Grid2D g = make_grid(pi, pi, 16, 16);

    // zero forcing
    std::vector<double> times;
    std::vector<SpectralField> zeros;
    for (int m = 0; m <= 16; ++m) {
        times.push_back(m / 16.0);
        zeros.emplace_back(g);
    }
    CHECK(energy(duhamel(times, zeros, 1.0, DispersionSign::kp1)) == 0.0);

    // short-time limit of constant forcing: t*f + O(t^2)
    SpectralField f0(g);
    f0.mode(1, 1) = 0.5;
    f0.mode(-1, -1) = 0.5;
    {
        std::vector<double> ts;
        std::vector<SpectralField> fs;
        int M = 16;
        double t = 1e-3;
        for (int m = 0; m <= M; ++m) {
            ts.push_back(t * m / M);
            fs.push_back(f0);
        }
        SpectralField I = duhamel(ts, fs, t, DispersionSign::kp1, 8);
        double err = 0.0;
        for (std::size_t k = 0; k < I.c.size(); ++k)
            err = std::max(err, std::abs(I.c[k] - t * f0.c[k]));
        CHECK(err <= 1e-5 * 0.5); // O(t^2) remainder, relative to |f|
    }

    // closed form for time-independent forcing: (e^{i t phi} - 1)/(i phi)
    {
        std::vector<double> ts;
        std::vector<SpectralField> fs;
        int M = 64;
        for (int m = 0; m <= M; ++m) {
            ts.push_back(double(m) / M);
            fs.push_back(f0);
        }
        SpectralField I = duhamel(ts, fs, 1.0, DispersionSign::kp1);
        double phi = dispersion_phi(1.0, 1.0, DispersionSign::kp1);
        cplx expected = (std::exp(cplx(0.0, phi)) - 1.0) / cplx(0.0, phi) * 0.5;
        CHECK(std::abs(I.mode(1, 1) - expected) < 1e-8);
    }

    // rejections
    std::vector<double> short_ts{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<SpectralField> short_fs(5, SpectralField(g));
    CHECK_THROWS_AS(duhamel(short_ts, short_fs, 1.0, DispersionSign::kp1),
                    invalid_input); // only 4 subintervals
    CHECK_THROWS_AS(duhamel(times, zeros, 2.0, DispersionSign::kp1), invalid_input);

    // physical-trajectory entry point matches the spectral one
    {
        std::vector<double> ts;
        std::vector<PhysicalField> slices;
        std::vector<SpectralField> fs;
        int M = 16;
        for (int m = 0; m <= M; ++m) {
            ts.push_back(double(m) / M);
            fs.push_back(f0);
            slices.push_back(inverse_transform(f0));
        }
        TrajectoryField ftraj = make_trajectory(g, ts, slices);
        SpectralField a = duhamel(ftraj, 1.0, DispersionSign::kp1, 16);
        SpectralField b = duhamel(ts, fs, 1.0, DispersionSign::kp1);
        double diff = 0.0;
        for (std::size_t k = 0; k < a.c.size(); ++k)
            diff = std::max(diff, std::abs(a.c[k] - b.c[k]));
        CHECK(diff <= 1e-13);
        CHECK_THROWS_AS(duhamel(ftraj, 1.0, DispersionSign::kp1, 12), invalid_input);
    }
}

TEST_CASE("nonlinear term splitting") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 64, 64);
    auto [zq, zl] = nonlinear_term(SpectralField(g), SpectralField(g),
                                   Nonlinearity::kp_quadratic);
    CHECK(energy(zq) == 0.0);
    CHECK(energy(zl) == 0.0);

    SpectrumSpec sp;
    sp.seed = 90;
    sp.a = 3.0;
    sp.b = 3.0;
    SpectralField F = random_spectrum(sp, g);
    SpectralField w = project_Q(F), v = project_lowpass(F);
    auto [nq, nl] = nonlinear_term(w, v, Nonlinearity::kp_quadratic);
    CHECK(q_complement_energy_fraction(nq) <= 1e-12);
    CHECK(q_energy_fraction(nl) <= 1e-12);

    // the two outputs sum to the unprojected term
    SpectralField u = w + v;
    SpectralField direct = deriv_x(dealias_two_thirds(forward_transform([&] {
        PhysicalField up = inverse_transform(dealias_two_thirds(u));
        PhysicalField sq(g);
        for (std::size_t k = 0; k < up.v.size(); ++k) sq.v[k] = up.v[k] * up.v[k];
        return sq;
    }())));
    SpectralField sum = nq + nl;
    double diff = 0.0, scale = std::sqrt(energy(direct)) + 1e-30;
    for (std::size_t k = 0; k < sum.c.size(); ++k)
        diff = std::max(diff, std::abs(sum.c[k] - direct.c[k]));
    CHECK(diff <= 1e-12 * scale);

    // single mode w = cos(2x): dx w^2 ~ sin(4x) lands in the Q output
    SpectralField c2(g);
    c2.mode(4, 0) = 0.5;  // xi = 2 on this grid
    c2.mode(-4, 0) = 0.5;
    auto [sq, sl] = nonlinear_term(c2, SpectralField(g), Nonlinearity::kp_quadratic);
    CHECK(energy(sl) == 0.0);
    CHECK(std::abs(sq.mode(8, 0)) > 0.0);

    CHECK_THROWS_AS(nonlinear_term(v, w, Nonlinearity::kp_quadratic), invalid_input);
}

TEST_CASE("picard with beta = 0 returns the linear flow in one iteration") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    PhysicalField u0 = small_data(g, 1e-2, 101);
    PicardConfig cfg;
    cfg.T = 0.5;
    cfg.beta = 0.0;
    cfg.M = 16;
    auto res = picard_solve(u0, cfg);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);

    SpectralField U0 = forward_transform(u0);
    project_zero_xmean(U0);
    double worst = 0.0;
    for (std::size_t m = 0; m < res.u.nt(); ++m) {
        PhysicalField lin =
            inverse_transform(propagate(U0, res.u.times[m], DispersionSign::kp1));
        worst = std::max(worst, l2_norm(lin - res.u.slices[m]) /
                                    std::max(l2_norm(lin), 1e-30));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("picard small-data contraction and residual") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    PhysicalField u0 = small_data(g, 1e-3, 102);
    PicardConfig cfg;
    cfg.T = 0.25;
    cfg.beta = 1.0;
    cfg.M = 128; // centered-difference residual needs the finer node grid
    cfg.tol = 1e-10;
    auto res = picard_solve(u0, cfg);
    CHECK(res.report.converged);
    CHECK(res.report.max_split_leak <= 1e-12);
    bool contracting = true;
    for (const auto& it : res.report.iterates)
        if (it.iter >= 2 && it.ratio >= 1.0) contracting = false;
    CHECK(contracting);

    auto resid = pde_residual(res.u, DispersionSign::kp1, 1.0,
                              Nonlinearity::kp_quadratic);
    CHECK(resid.rel_residual < 1e-4);
}

TEST_CASE("reference integrator: linear case is exact, L2 is conserved") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    PhysicalField u0 = small_data(g, 1e-2, 103);
    TrajectoryField lin = reference_integrate(u0, 0.5, 0.5 / 64, DispersionSign::kp1,
                                              0.0, Nonlinearity::kp_quadratic, 8);
    SpectralField U0 = forward_transform(u0);
    project_zero_xmean(U0);
    for (std::size_t m = 0; m < lin.nt(); ++m) {
        PhysicalField ref =
            inverse_transform(propagate(U0, lin.times[m], DispersionSign::kp1));
        CHECK(l2_norm(ref - lin.slices[m]) <= 1e-10 * std::max(1e-30, l2_norm(ref)));
    }

    TrajectoryField nl = reference_integrate(u0, 1.0, 1.0 / 512, DispersionSign::kp1,
                                             1.0, Nonlinearity::kp_quadratic, 64);
    auto series = l2_series(nl);
    for (double v : series)
        CHECK(std::abs(v - series[0]) <= 1e-6 * series[0]);
}

TEST_CASE("picard agrees with the reference integrator") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    PhysicalField u0 = small_data(g, 1e-3, 104);
    PicardConfig cfg;
    cfg.T = 0.25;
    cfg.M = 32;
    auto pic = picard_solve(u0, cfg);
    TrajectoryField ref = reference_integrate(u0, 0.25, 0.25 / 256,
                                              DispersionSign::kp1, 1.0,
                                              Nonlinearity::kp_quadratic, 8);
    REQUIRE(ref.nt() == pic.u.nt());
    double worst = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < ref.nt(); ++m) {
        worst = std::max(worst, l2_norm(pic.u.slices[m] - ref.slices[m]));
        scale = std::max(scale, l2_norm(ref.slices[m]));
    }
    CHECK(worst / scale < 1e-4);
}

TEST_CASE("modified nonlinearity option converges on small data") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    PhysicalField u0 = small_data(g, 1e-2, 105);
    PicardConfig cfg;
    cfg.T = 0.25;
    cfg.M = 32;
    cfg.nonlinearity = Nonlinearity::mkp_cubic;
    auto res = picard_solve(u0, cfg);
    CHECK(res.report.converged);
    auto resid = pde_residual(res.u, DispersionSign::kp1, 1.0, Nonlinearity::mkp_cubic);
    CHECK(resid.rel_residual < 1e-3);
}

TEST_CASE("rescaling is exact on nested grids") {
    Grid2D g = make_grid(pi, pi, 32, 32);
    SpectrumSpec sp;
    sp.seed = 106;
    sp.a = 3.0;
    sp.b = 3.0;
    PhysicalField u = random_field(sp, g);

    PhysicalField same = rescale_field(u, 1.0);
    CHECK(l2_norm(same - u) == 0.0);
    CHECK_THROWS_AS(rescale_field(u, 0.3), invalid_input);

    for (double rho : {0.5, 0.25, 0.125, 0.0625}) {
        PhysicalField ur = rescale_field(u, rho);
        CHECK(l2_norm(ur) ==
              doctest::Approx(std::sqrt(rho) * l2_norm(u)).epsilon(1e-12));
        auto dx = [](const PhysicalField& f) {
            return l2_norm(deriv_x(forward_transform(f)));
        };
        CHECK(dx(ur) == doctest::Approx(std::pow(rho, 1.5) * dx(u)).epsilon(1e-12));
    }

    auto checks = scaling_checks(u, {0.5, 0.25, 0.125, 0.0625});
    for (const auto& c : checks) {
        bool weighted = c.id.rfind("w_", 0) == 0;
        double tol = weighted ? 0.02 * std::abs(c.target) : 1e-10;
        CHECK(std::abs(c.fitted - c.target) <= tol);
    }
}

TEST_CASE("divergence raises an error carrying the history") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    SpectrumSpec sp;
    sp.seed = 107;
    sp.a = 4.0;
    sp.b = 4.0;
    PhysicalField u0 = random_field(sp, g);
    u0 = (50.0 / l2_norm(u0)) * u0; // far beyond any smallness regime
    PicardConfig cfg;
    cfg.T = 1.0;
    cfg.beta = 5.0;
    cfg.M = 16;
    cfg.max_iter = 40;
    try {
        picard_solve(u0, cfg);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.history.size() >= 2);
    }
}
