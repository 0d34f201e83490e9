#pragma once

#include <cmath>

#include "kpkit/grid.hpp"

namespace kpkit {

/// Real samples u(x_i, y_j) at one instant. Immutable by convention: every
/// operation returns a new field.
struct PhysicalField {
    Grid2D grid;
    std::vector<double> v; // row-major, v[i*Ny + j]

    PhysicalField() = default;
    explicit PhysicalField(const Grid2D& g) : grid(g), v(g.size(), 0.0) {}

    double& at(int i, int j) { return v[grid.at(i, j)]; }
    double at(int i, int j) const { return v[grid.at(i, j)]; }
};

/// Fourier-series amplitudes c[m,n] in FFT storage order. real_symmetric
/// tracks Hermitian symmetry c[-m,-n] = conj(c[m,n]).
struct SpectralField {
    Grid2D grid;
    std::vector<cplx> c;
    bool real_symmetric = true;

    SpectralField() = default;
    explicit SpectralField(const Grid2D& g, bool real_sym = true)
        : grid(g), c(g.size(), cplx{}), real_symmetric(real_sym) {}

    cplx& at(int p, int q) { return c[grid.at(p, q)]; }
    cplx at(int p, int q) const { return c[grid.at(p, q)]; }

    cplx& mode(int m, int n) { return c[grid.at(grid.index_x(m), grid.index_y(n))]; }
    cplx mode(int m, int n) const { return c[grid.at(grid.index_x(m), grid.index_y(n))]; }
};

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    require(a.grid == b.grid, "field +: grid mismatch");
    SpectralField r = a;
    for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] += b.c[k];
    r.real_symmetric = a.real_symmetric && b.real_symmetric;
    return r;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    require(a.grid == b.grid, "field -: grid mismatch");
    SpectralField r = a;
    for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] -= b.c[k];
    r.real_symmetric = a.real_symmetric && b.real_symmetric;
    return r;
}

inline SpectralField operator*(double s, const SpectralField& a) {
    SpectralField r = a;
    for (auto& z : r.c) z *= s;
    return r;
}

inline PhysicalField operator+(const PhysicalField& a, const PhysicalField& b) {
    require(a.grid == b.grid, "field +: grid mismatch");
    PhysicalField r = a;
    for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] += b.v[k];
    return r;
}

inline PhysicalField operator-(const PhysicalField& a, const PhysicalField& b) {
    require(a.grid == b.grid, "field -: grid mismatch");
    PhysicalField r = a;
    for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] -= b.v[k];
    return r;
}

inline PhysicalField operator*(double s, const PhysicalField& a) {
    PhysicalField r = a;
    for (auto& x : r.v) x *= s;
    return r;
}

/// Discrete L2 with dx*dy quadrature weights.
inline double l2_norm(const PhysicalField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s * f.grid.dx() * f.grid.dy());
}

/// Spectral L2 with the 4*Lx*Ly weight; equals the physical L2 exactly.
inline double l2_norm(const SpectralField& F) {
    double s = 0.0;
    for (const auto& z : F.c) s += std::norm(z);
    return std::sqrt(s * F.grid.area());
}

inline double energy(const SpectralField& F) {
    double s = 0.0;
    for (const auto& z : F.c) s += std::norm(z);
    return s;
}

} // namespace kpkit
