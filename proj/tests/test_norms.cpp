#include <doctest.h>

#include <cmath>

#include "kpkit/evolution.hpp"
#include "kpkit/norms.hpp"
#include "kpkit/random_field.hpp"

using namespace kpkit;

namespace {

TrajectoryField constant_traj(const Grid2D& g, double c, double T, int nt) {
    std::vector<double> times;
    std::vector<PhysicalField> slices;
    for (int m = 0; m <= nt; ++m) {
        times.push_back(T * m / nt);
        PhysicalField f(g);
        for (auto& v : f.v) v = c;
        slices.push_back(std::move(f));
    }
    return make_trajectory(g, times, slices);
}

TrajectoryField static_traj(const PhysicalField& f) {
    return make_trajectory(f.grid, {0.0, 1.0}, {f, f});
}

PhysicalField gaussian_bump(const Grid2D& g, double wx, double wy) {
    PhysicalField f(g);
    for (int i = 0; i < g.Nx; ++i)
        for (int j = 0; j < g.Ny; ++j) {
            double x = g.x(i), y = g.y(j);
            f.at(i, j) = std::sin(x) * std::exp(-x * x / (wx * wx) - y * y / (wy * wy));
        }
    return f;
}

} // namespace

TEST_CASE("mixed norm of a constant field") {
    Grid2D g = make_grid(pi, 2 * pi, 16, 16);
    double T = 0.7, c = -2.5;
    TrajectoryField traj = constant_traj(g, c, T, 8);
    double v = mixed_norm(traj, {{Var::t, Var::x, Var::y}, {2.0, 2.0, 2.0}});
    CHECK(v == doctest::Approx(std::abs(c) * std::sqrt(g.area() * T)).epsilon(1e-12));

    double vs = mixed_norm(traj, {{Var::x, Var::t, Var::y}, {inf, 2.0, 2.0}});
    CHECK(vs == doctest::Approx(std::abs(c) * std::sqrt(2.0 * g.Ly * T)).epsilon(1e-12));

    TrajectoryField zero = constant_traj(g, 0.0, T, 8);
    CHECK(mixed_norm(zero, {{Var::t, Var::x, Var::y}, {2.0, 2.0, 2.0}}) == 0.0);
}

TEST_CASE("mixed norm: single x-column support") {
    Grid2D g = make_grid(pi, pi, 16, 16);
    TrajectoryField traj = constant_traj(g, 0.0, 1.0, 4);
    for (std::size_t m = 0; m < traj.nt(); ++m)
        for (int j = 0; j < g.Ny; ++j) traj.slices[m].at(5, j) = 1.0 + double(j) / g.Ny;
    double whole = mixed_norm(traj, {{Var::x, Var::t, Var::y}, {inf, 2.0, 2.0}});
    // restrict to the column by hand
    double col = 0.0;
    {
        double acc = 0.0;
        std::vector<double> tw(traj.nt(), 0.25);
        tw.front() = tw.back() = 0.125;
        for (std::size_t m = 0; m < traj.nt(); ++m)
            for (int j = 0; j < g.Ny; ++j)
                acc += tw[m] * g.dy() * traj.slices[m].at(5, j) * traj.slices[m].at(5, j);
        col = std::sqrt(acc);
    }
    CHECK(whole == doctest::Approx(col).epsilon(1e-12));
}

TEST_CASE("mixed norm rejects bad specs") {
    Grid2D g = make_grid(pi, pi, 16, 16);
    TrajectoryField traj = constant_traj(g, 1.0, 1.0, 2);
    CHECK_THROWS_AS(mixed_norm(traj, {{Var::t, Var::t, Var::y}, {2.0, 2.0, 2.0}}),
                    invalid_input);
    CHECK_THROWS_AS(mixed_norm(traj, {{Var::t, Var::x, Var::y}, {0.5, 2.0, 2.0}}),
                    invalid_input);
}

TEST_CASE("weighted Sobolev norm basics") {
    Grid2D g = make_grid(pi, pi, 32, 32);
    SpectrumSpec sp;
    sp.seed = 41;
    PhysicalField f = random_field(sp, g);
    CHECK(weighted_sobolev_norm(f, 0.0, 0.0, 0.0, false, false) ==
          doctest::Approx(l2_norm(f)).epsilon(1e-12));

    PhysicalField c2(g);
    for (int i = 0; i < g.Nx; ++i)
        for (int j = 0; j < g.Ny; ++j) c2.at(i, j) = std::cos(2.0 * g.x(i));
    CHECK(weighted_sobolev_norm(c2, 1.0, 0.0, 0.0, true, false) ==
          doctest::Approx(2.0 * l2_norm(c2)).epsilon(1e-12));
}

TEST_CASE("weight ordering on a field concentrated near y = 0") {
    Grid2D g = make_grid(pi, 4 * pi, 32, 64);
    PhysicalField f = gaussian_bump(g, 2.0, 0.8);
    double n0 = weighted_sobolev_norm(f, 0.0, 0.0, 0.0, false, false);
    double n1 = weighted_sobolev_norm(f, 0.0, 0.0, 1.0, false, false);
    CHECK(n1 >= n0);
    CHECK(std::abs(n1 - n0) / n0 < 0.10);
}

TEST_CASE("z0 norm components") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    PhysicalField zero(g);
    auto rz = z0_norm(zero, 0.05);
    CHECK(rz.total == 0.0);
    for (double c : rz.components) CHECK(c == 0.0);

    // field entirely in |xi| >= 1: the three (Id-Q) components vanish
    SpectrumSpec sp;
    sp.seed = 51;
    sp.support = Support::q_only;
    PhysicalField q = random_field(sp, g);
    auto rq = z0_norm(q, 0.05);
    // projector support: only lattice roundoff survives on the other side
    CHECK(rq.components[1] <= 1e-12 * rq.total);
    CHECK(rq.components[2] <= 1e-12 * rq.total);
    CHECK(rq.components[3] <= 1e-12 * rq.total);
    CHECK(rq.components[0] > 0.0);

    // and a low-frequency field kills the Q components
    SpectrumSpec sl;
    sl.seed = 52;
    sl.support = Support::lowfreq_only;
    PhysicalField lo = random_field(sl, g);
    auto rl = z0_norm(lo, 0.05);
    CHECK(rl.components[4] <= 1e-12 * rl.total);
    CHECK(rl.components[5] <= 1e-12 * rl.total);
    CHECK(rl.components[6] <= 1e-12 * rl.total);
}

TEST_CASE("exponent table instantiation at eps = 0.05") {
    CHECK(0.75 + 0.05 == doctest::Approx(0.8));  // sigma2 = sigma3
    CHECK(1.5 + 0.05 == doctest::Approx(1.55));  // gamma2
    // y0 component orders at eps = 0.05
    CHECK(-(0.25 + 0.05) == doctest::Approx(-0.3));
    CHECK(1.0 + 0.05 == doctest::Approx(1.05));
    CHECK(-(0.5 + 0.05) == doctest::Approx(-0.55));
    CHECK(0.5 + 0.05 == doctest::Approx(0.55));
    CHECK(-(0.75 + 0.05) == doctest::Approx(-0.8));
    CHECK(1.5 + 0.05 == doctest::Approx(1.55));
}

TEST_CASE("x norms") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    XNormParams prm = XNormParams::from_epsilon(0.05);
    CHECK(prm.sigma1 == doctest::Approx(0.8));
    CHECK(prm.gamma1 == doctest::Approx(0.55));
    CHECK(prm.sigma2 == doctest::Approx(1.05));
    CHECK(prm.alpha == doctest::Approx(0.55));

    TrajectoryField zero = make_trajectory(
        g, {0.0, 0.5, 1.0}, {PhysicalField(g), PhysicalField(g), PhysicalField(g)});
    for (int i = 1; i <= 12; ++i) CHECK(x_norm(zero, i, prm) == 0.0);
    CHECK_THROWS_AS(x_norm(zero, 13, prm), invalid_input);
    CHECK_THROWS_AS(x_norm(zero, 0, prm), invalid_input);

    // i = 1 on a time-constant field equals its H2 norm
    SpectrumSpec sp;
    sp.seed = 61;
    sp.support = Support::q_only;
    PhysicalField f = random_field(sp, g);
    TrajectoryField traj = static_traj(f);
    CHECK(x_norm(traj, 1, prm) == doctest::Approx(h2_norm(f)).epsilon(1e-12));

    // i = 7 vanishes on a P+-supported (and Q-supported) trajectory
    SpectrumSpec spp;
    spp.seed = 62;
    spp.support = Support::pplus_only;
    PhysicalField fp = random_field(spp, g);
    TrajectoryField tp = static_traj(fp);
    CHECK(x_norm(tp, 7, prm) <= 1e-12 * x_norm(tp, 5, prm));
    CHECK(x_norm(tp, 5, prm) > 0.0);
}

TEST_CASE("y norm set requires low-frequency support") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    XNormParams prm = XNormParams::from_epsilon(0.05);
    SpectrumSpec sp;
    sp.seed = 63;
    sp.support = Support::q_only;
    TrajectoryField tq = static_traj(random_field(sp, g));
    CHECK_THROWS_AS(y_norm_set(tq, prm), invalid_input);

    SpectrumSpec sl;
    sl.seed = 64;
    sl.support = Support::lowfreq_only;
    TrajectoryField tl = static_traj(random_field(sl, g));
    auto y = y_norm_set(tl, prm);
    CHECK(y.value > 0.0);
    CHECK(y.components.size() == 6);
}

TEST_CASE("x0/y0 data norms project their side") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 32, 32);
    SpectrumSpec sp;
    sp.seed = 65;
    sp.support = Support::q_only;
    PhysicalField q = random_field(sp, g);
    auto x0 = x0_norm(q, XNormParams::from_epsilon(0.05));
    CHECK(x0.value > 0.0);
    auto y0 = y0_norm(q, 0.05);
    // all (Id-Q) parts vanish on a Q-supported field (up to lattice roundoff)
    CHECK(y0.value <= 1e-12 * x0.value);

    PhysicalField zero(g);
    CHECK(y0_norm(zero, 0.05).value == 0.0);
    CHECK(x0_norm(zero, XNormParams::from_epsilon(0.05)).value == 0.0);
}

TEST_CASE("norm axioms on random fields") {
    Grid2D g = make_grid(2 * pi, 8.0, 32, 32);
    SpectrumSpec sp;
    sp.seed = 71;
    PhysicalField f = random_field(sp, g);
    SpectrumSpec sp2;
    sp2.seed = 72;
    PhysicalField h = random_field(sp2, g);

    auto norms = std::vector<std::function<double(const PhysicalField&)>>{
        [](const PhysicalField& u) { return l2_norm(u); },
        [](const PhysicalField& u) { return h2_norm(u); },
        [](const PhysicalField& u) {
            return weighted_sobolev_norm(u, 0.8, 0.55, 0.55, false, false);
        },
        [](const PhysicalField& u) { return z0_norm(u, 0.05).total; },
        [](const PhysicalField& u) {
            return lattice_maximal_norm(static_traj(u), LatticeDir::y_outer, 0.55);
        },
    };
    for (const auto& N : norms) {
        double nf = N(f), nh = N(h);
        CHECK(nf > 0.0);
        for (double c : {-2.0, 0.5, 10.0})
            CHECK(N(c * f) == doctest::Approx(std::abs(c) * nf).epsilon(1e-12));
        CHECK(N(f + h) <= nf + nh + 1e-10);
        CHECK(N(0.0 * f) == 0.0);
    }
}

TEST_CASE("lattice maximal norm") {
    Grid2D g = make_grid(pi, 8.0, 16, 64);
    // single unit-cell support: equals the sup over that cell
    PhysicalField f(g);
    for (int i = 0; i < g.Nx; ++i)
        for (int j = 0; j < g.Ny; ++j) {
            double y = g.y(j);
            if (y >= 2.0 && y < 3.0) f.at(i, j) = std::sin(g.x(i)) * (3.0 - y);
        }
    double sup = 0.0;
    for (double v : f.v) sup = std::max(sup, std::abs(v));
    CHECK(lattice_maximal_norm(static_traj(f), LatticeDir::y_outer, 0.0) ==
          doctest::Approx(sup).epsilon(1e-12));

    // constant in y of height h over 2Ly cells
    PhysicalField c(g);
    for (auto& v : c.v) v = 0.7;
    CHECK(lattice_maximal_norm(static_traj(c), LatticeDir::y_outer, 0.0) ==
          doctest::Approx(0.7 * std::sqrt(2.0 * g.Ly)).epsilon(1e-12));

    // weight monotonicity
    SpectrumSpec sp;
    sp.seed = 81;
    PhysicalField r = random_field(sp, g);
    CHECK(lattice_maximal_norm(static_traj(r), LatticeDir::y_outer, 0.55) >=
          lattice_maximal_norm(static_traj(r), LatticeDir::y_outer, 0.0));

    Grid2D small = make_grid(pi, 2.0, 16, 16);
    PhysicalField s(small);
    CHECK_THROWS_AS(lattice_maximal_norm(static_traj(s), LatticeDir::y_outer, 0.0),
                    invalid_input);
}

TEST_CASE("declarative norm specs evaluate to flat records") {
    Grid2D g = make_grid(2 * pi, 8.0, 32, 32);
    SpectrumSpec sp;
    sp.seed = 91;
    PhysicalField f = random_field(sp, g);
    TrajectoryField traj = static_traj(f);

    NormSpec ms;
    ms.kind = NormSpec::Kind::mixed_lebesgue;
    ms.mixed = {{Var::t, Var::x, Var::y}, {2.0, 2.0, 2.0}};
    CHECK(evaluate_norm(ms, traj).value > 0.0);

    NormSpec ws;
    ws.kind = NormSpec::Kind::weighted_sobolev;
    CHECK(evaluate_norm(ws, traj).value == doctest::Approx(l2_norm(f)));

    NormSpec z;
    z.kind = NormSpec::Kind::z0;
    auto zr = evaluate_norm(z, traj);
    CHECK(zr.components.size() == 7);
    CHECK(zr.value == doctest::Approx(z0_norm(f, 0.05).total));

    NormSpec lm;
    lm.kind = NormSpec::Kind::lattice_maximal;
    CHECK(evaluate_norm(lm, traj).value ==
          doctest::Approx(lattice_maximal_norm(traj, LatticeDir::y_outer, 0.0)));

    NormSpec xi;
    xi.kind = NormSpec::Kind::x_i;
    xi.i = 1;
    CHECK(evaluate_norm(xi, traj).value == doctest::Approx(h2_norm(f)));
}

TEST_CASE("norm discretization trend (reported)") {
    // smooth test field; values should move < 1% under refinement
    Grid2D g1 = make_grid(pi, 8.0, 32, 32);
    Grid2D g2 = make_grid(pi, 8.0, 64, 64);
    auto build = [](const Grid2D& g) {
        PhysicalField f(g);
        for (int i = 0; i < g.Nx; ++i)
            for (int j = 0; j < g.Ny; ++j) {
                double x = g.x(i), y = g.y(j);
                f.at(i, j) = std::sin(x) * std::exp(-y * y);
            }
        return f;
    };
    PhysicalField f1 = build(g1), f2 = build(g2);
    double a1 = l2_norm(f1), a2 = l2_norm(f2);
    double b1 = h2_norm(f1), b2 = h2_norm(f2);
    MESSAGE("l2: ", a1, " -> ", a2, "  h2: ", b1, " -> ", b2);
    CHECK(std::abs(a2 - a1) / a1 < 0.01);
    CHECK(std::abs(b2 - b1) / b1 < 0.01);
}
