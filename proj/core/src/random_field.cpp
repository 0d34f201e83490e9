#include "kpkit/random_field.hpp"

#include <cmath>

namespace kpkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double to_unit(std::uint64_t h) {
    return (double(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard complex Gaussian from the (seed, m, n) counter.
cplx gaussian_mode(std::uint64_t seed, int m, int n) {
    std::uint64_t key = seed;
    key = splitmix64(key ^ (std::uint64_t(std::uint32_t(m)) << 32 | std::uint32_t(n)));
    std::uint64_t h1 = splitmix64(key);
    std::uint64_t h2 = splitmix64(h1);
    double u1 = to_unit(h1), u2 = to_unit(h2);
    double r = std::sqrt(-2.0 * std::log(u1));
    return cplx(r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)) / std::sqrt(2.0);
}

bool keep_mode(const SpectrumSpec& spec, double xi, double lam) {
    switch (spec.support) {
        case Support::full: return true;
        case Support::q_only: return std::abs(xi) >= 1.0;
        case Support::lowfreq_only: return std::abs(xi) < 1.0;
        case Support::pplus_only:
            return std::abs(xi) >= 1.0 && xi * xi >= std::abs(lam);
        case Support::pminus_only:
            return std::abs(xi) >= 1.0 && xi * xi < std::abs(lam);
        case Support::single_block: return theta_kj(xi, lam, spec.block) > 0.0;
    }
    return false;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, const std::string& tag,
                          std::uint64_t index) {
    std::uint64_t h = splitmix64(master);
    for (unsigned char c : tag) h = splitmix64(h ^ c);
    return splitmix64(h ^ index);
}

SpectralField random_spectrum(const SpectrumSpec& spec, const Grid2D& g) {
    require(spec.a >= 0.0 && spec.b >= 0.0, "random_spectrum: decay must be >= 0");
    SpectralField F(g, true);
    if (spec.delta_mode) {
        auto [m, n] = *spec.delta_mode;
        require(m > 0 && m < g.Nx / 2 && std::abs(n) < g.Ny / 2,
                "random_spectrum: delta mode outside the lattice");
        F.mode(m, n) = 0.5 * spec.amplitude;
        F.mode(-m, -n) = 0.5 * spec.amplitude;
        return F;
    }
    // Fill xi > 0 modes; Hermitian partners give a real field. The xi = 0
    // column stays zero (zero x-mean convention).
    for (int m = 1; m < g.Nx / 2; ++m) {
        double xi = pi * m / g.Lx;
        for (int n = -g.Ny / 2 + 1; n < g.Ny / 2; ++n) {
            double lam = pi * n / g.Ly;
            if (!keep_mode(spec, xi, lam)) continue;
            double mag = spec.amplitude *
                         std::pow(1.0 + xi * xi, -0.5 * spec.a) *
                         std::pow(1.0 + lam * lam, -0.5 * spec.b);
            cplx z = mag * gaussian_mode(spec.seed, m, n);
            F.mode(m, n) = z;
            F.mode(-m, -n) = std::conj(z);
        }
    }
    return F;
}

PhysicalField random_field(const SpectrumSpec& spec, const Grid2D& g) {
    return inverse_transform(random_spectrum(spec, g));
}

} // namespace kpkit
