#include <doctest.h>

#include <cmath>

#include "kpkit/fft.hpp"
#include "kpkit/multipliers.hpp"
#include "kpkit/random_field.hpp"

using namespace kpkit;

namespace {

SpectralField single_mode(const Grid2D& g, int m, int n, double amp = 1.0) {
    SpectralField F(g);
    F.mode(m, n) = 0.5 * amp;
    F.mode(-m, -n) = 0.5 * amp;
    return F;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.c.size(); ++k)
        d = std::max(d, std::abs(a.c[k] - b.c[k]));
    return d;
}

} // namespace

TEST_CASE("Q keeps |xi| >= 1 and is idempotent") {
    Grid2D g = make_grid(2 * pi, 2 * pi, 16, 16); // xi spacing 1/2
    SpectralField lowm = single_mode(g, 1, 0);    // xi = 0.5
    CHECK(energy(project_Q(lowm)) == 0.0);
    SpectralField highm = single_mode(g, 4, 0); // xi = 2
    CHECK(max_coeff_diff(project_Q(highm), highm) == 0.0);

    SpectrumSpec sp;
    sp.seed = 5;
    SpectralField F = random_spectrum(sp, g);
    CHECK(max_coeff_diff(project_Q(project_Q(F)), project_Q(F)) == 0.0);
    CHECK(max_coeff_diff(project_Pplus(project_Pplus(F)), project_Pplus(F)) == 0.0);
    CHECK(max_coeff_diff(project_Pminus(project_Pminus(F)), project_Pminus(F)) == 0.0);
}

TEST_CASE("P+ / P- split") {
    Grid2D g = make_grid(pi, pi, 16, 16);
    // mode (2,1): |lambda/xi| = 0.5 <= 2 -> kept by P+
    SpectralField a = single_mode(g, 2, 1);
    CHECK(max_coeff_diff(project_Pplus(a), a) == 0.0);
    CHECK(energy(project_Pminus(a)) == 0.0);
    // mode (1,3): |lambda/xi| = 3 > 1 -> kept by P-
    SpectralField b = single_mode(g, 1, 3);
    CHECK(max_coeff_diff(project_Pminus(b), b) == 0.0);
    CHECK(energy(project_Pplus(b)) == 0.0);

    SpectrumSpec sp;
    sp.seed = 9;
    SpectralField F = random_spectrum(sp, g);
    CHECK(max_coeff_diff(project_Pplus(F) + project_Pminus(F), F) == 0.0);
    CHECK(max_coeff_diff(project_Q(F) + project_lowpass(F), F) == 0.0);
}

TEST_CASE("orthogonality and contraction of sharp projections") {
    Grid2D g = make_grid(pi, pi, 16, 16);
    SpectrumSpec sp;
    sp.seed = 12;
    SpectralField F = random_spectrum(sp, g);
    SpectrumSpec sp2;
    sp2.seed = 13;
    SpectralField G = random_spectrum(sp2, g);
    cplx inner{};
    SpectralField Pp = project_Pplus(F), Pm = project_Pminus(G);
    for (std::size_t k = 0; k < Pp.c.size(); ++k)
        inner += Pp.c[k] * std::conj(Pm.c[k]);
    CHECK(std::abs(inner) == 0.0);

    for (auto proj : {project_Q, project_lowpass, project_Pplus, project_Pminus,
                      project_Qtilde_ratio, project_Qtilde_y})
        CHECK(l2_norm(proj(F)) <= l2_norm(F) + 1e-15);
    for (int k = -1; k <= 2; ++k)
        for (int j = -1; j <= 2; ++j)
            CHECK(l2_norm(block_Tkj(F, {k, j})) <= l2_norm(F) * (1.0 + 1e-14));
}

TEST_CASE("the two Q-tilde cutoffs differ") {
    Grid2D g = make_grid(pi, pi, 16, 16);
    // mode (3, 2): |lambda/xi| = 2/3 < 1 but |lambda| = 2 >= 1
    SpectralField F = single_mode(g, 3, 2);
    CHECK(energy(project_Qtilde_ratio(F)) == 0.0);
    CHECK(energy(project_Qtilde_y(F)) > 0.0);
}

TEST_CASE("bump profile: support and squared partition of unity") {
    BumpProfile psi;
    CHECK(psi(0.5 - 1e-15) == 0.0);
    CHECK(psi(2.0 + 1e-15) == 0.0);
    CHECK(psi(1.0) == doctest::Approx(1.0));
    for (double r = 0.01; r < 100.0; r *= 1.07) {
        double s = 0.0;
        for (int k = -12; k <= 12; ++k) {
            double v = psi(std::ldexp(r, -k));
            s += v * v;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("T_{k,j} block support arithmetic") {
    Grid2D g = make_grid(pi, pi, 32, 32);
    SpectralField F = single_mode(g, 1, 1); // theta_{0,0}(1,1) = psi(1)^2 = 1
    SpectralField B = block_Tkj(F, {0, 0});
    CHECK(std::abs(B.mode(1, 1) - cplx(0.5, 0.0)) < 1e-14);

    Grid2D g2 = make_grid(pi, pi, 256, 256);
    SpectralField M = single_mode(g2, 4, 64); // |lambda/xi| = 16
    for (int k = -2; k <= 6; ++k)
        for (int j = 0; j <= 8; ++j) {
            double e = energy(block_Tkj(M, {k, j}));
            bool can_hit = (k >= 1 && k <= 3) && (j >= 3 && j <= 5);
            if (!can_hit) CHECK(e == 0.0);
        }
    double tot = 0.0;
    for (int k = 1; k <= 3; ++k)
        for (int j = 3; j <= 5; ++j) tot += energy(block_Tkj(M, {k, j}));
    CHECK(tot > 0.0);
}

TEST_CASE("squared partition sum of T_{k,j}^2 reconstructs the field") {
    Grid2D g = make_grid(pi, pi, 64, 64);
    SpectrumSpec sp;
    sp.seed = 31;
    sp.support = Support::single_block;
    sp.block = {1, 1};
    SpectralField F = random_spectrum(sp, g);
    REQUIRE(energy(F) > 0.0);
    SpectralField sum(g);
    for (int k = -3; k <= 5; ++k)
        for (int j = -3; j <= 5; ++j) {
            SpectralField T2 = block_Tkj(block_Tkj(F, {k, j}), {k, j});
            sum = sum + T2;
        }
    double rel = 0.0;
    for (std::size_t i = 0; i < F.c.size(); ++i)
        rel = std::max(rel, std::abs(sum.c[i] - F.c[i]));
    CHECK(rel <= 1e-10 * std::sqrt(energy(F)));
}

TEST_CASE("fractional derivatives") {
    Grid2D g = make_grid(pi, pi, 32, 32);
    SpectralField C = single_mode(g, 1, 0); // cos(x)
    SpectralField D1 = frac_deriv(C, {Axis::x, 1.0, FracKind::homogeneous});
    CHECK(std::abs(D1.mode(1, 0) - cplx(0.5, 0.0)) < 1e-14); // amplitude 1 field

    SpectrumSpec sp;
    sp.seed = 17;
    sp.support = Support::q_only;
    SpectralField F = random_spectrum(sp, g);
    SpectralField half_twice = frac_deriv(frac_deriv(F, {Axis::x, 0.5, FracKind::homogeneous}),
                                          {Axis::x, 0.5, FracKind::homogeneous});
    SpectralField once = frac_deriv(F, {Axis::x, 1.0, FracKind::homogeneous});
    CHECK(max_coeff_diff(half_twice, once) <= 1e-13 * std::sqrt(energy(once) + 1.0));

    SpectralField identity = frac_deriv(F, {Axis::y, 0.0, FracKind::inhomogeneous});
    CHECK(max_coeff_diff(identity, F) == 0.0);

    // negative homogeneous order demands an empty zero line
    SpectralField withy0(g);
    withy0.mode(2, 0) = 0.5;
    withy0.mode(-2, 0) = 0.5;
    CHECK_THROWS_AS(frac_deriv(withy0, {Axis::y, -0.5, FracKind::homogeneous}),
                    invalid_input);
    CHECK_NOTHROW(frac_deriv(withy0, {Axis::x, -0.5, FracKind::homogeneous}));
    CHECK_THROWS_AS(frac_deriv(F, {Axis::x, -2.5, FracKind::homogeneous}),
                    invalid_input);
}

TEST_CASE("antiderivative in x") {
    Grid2D g = make_grid(pi, pi, 32, 32);
    auto cosxy = single_mode(g, 1, 1);
    SpectralField dx = deriv_x(cosxy);
    SpectralField back = antideriv_x(dx);
    CHECK(max_coeff_diff(back, cosxy) < 1e-12);

    SpectralField with_mean(g);
    with_mean.mode(0, 1) = 0.5;
    with_mean.mode(0, -1) = 0.5;
    CHECK_THROWS_AS(antideriv_x(with_mean), invalid_input);

    // dx^{-1} dy^2 on mode (1,2): multiplier -lambda^2/(i xi), modulus 4
    SpectralField m12 = single_mode(g, 1, 2);
    SpectralField r = antideriv_x(deriv_y(deriv_y(m12)));
    CHECK(std::abs(r.mode(1, 2)) == doctest::Approx(0.5 * 4.0).epsilon(1e-13));
}

TEST_CASE("weight <y>^alpha") {
    Grid2D g = make_grid(pi, 2 * pi, 16, 32);
    SpectrumSpec sp;
    sp.seed = 23;
    PhysicalField f = random_field(sp, g);
    PhysicalField w0 = weight_y(f, 0.0);
    for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(w0.v[i] == f.v[i]);

    // at y = 0 any alpha keeps the value
    int j0 = g.Ny / 2; // y(j0) = 0
    CHECK(g.y(j0) == doctest::Approx(0.0));
    PhysicalField w2 = weight_y(f, 2.0);
    CHECK(w2.at(3, j0) == doctest::Approx(f.at(3, j0)));

    // at y = sqrt(3), alpha = 1 the weight is 2
    PhysicalField one(g);
    for (auto& v : one.v) v = 1.0;
    PhysicalField w1 = weight_y(one, 1.0);
    double y = std::sqrt(3.0);
    // nearest sample check by direct formula
    CHECK(std::pow(1.0 + y * y, 0.5) == doctest::Approx(2.0));
    CHECK(w1.at(0, j0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(weight_y(f, 2.5), invalid_input);
}

TEST_CASE("diagonal multipliers commute") {
    Grid2D g = make_grid(pi, pi, 24, 24);
    SpectrumSpec sp;
    sp.seed = 29;
    sp.support = Support::q_only;
    SpectralField F = random_spectrum(sp, g);
    auto a = [&](const SpectralField& X) { return project_Pplus(deriv_x(X)); };
    auto b = [&](const SpectralField& X) {
        return frac_deriv(X, {Axis::y, 0.7, FracKind::inhomogeneous});
    };
    CHECK(max_coeff_diff(a(b(F)), b(a(F))) <= 1e-13 * std::sqrt(energy(F) + 1.0));
}

TEST_CASE("dealias mask") {
    Grid2D g = make_grid(pi, pi, 24, 24);
    SpectralField F(g);
    F.mode(9, 0) = 0.5;
    F.mode(-9, 0) = 0.5; // |m| = 9 > 24/3
    CHECK(energy(dealias_two_thirds(F)) == 0.0);
    SpectralField G(g);
    G.mode(8, 0) = 0.5;
    G.mode(-8, 0) = 0.5; // 3*8 = 24, kept
    CHECK(energy(dealias_two_thirds(G)) == energy(G));
}
