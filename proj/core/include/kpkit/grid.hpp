#pragma once

#include "kpkit/common.hpp"

namespace kpkit {

/// Truncated periodic lattice on [-Lx,Lx) x [-Ly,Ly).
/// Frequencies xi_m = pi*m/Lx for m in [-Nx/2, Nx/2), lambda_n = pi*n/Ly.
/// The Nyquist row/column (m = -Nx/2, n = -Ny/2) is kept identically zero
/// in every field.
struct Grid2D {
    double Lx = 0.0, Ly = 0.0;
    int Nx = 0, Ny = 0;

    std::size_t size() const { return std::size_t(Nx) * std::size_t(Ny); }
    std::size_t at(int i, int j) const { return std::size_t(i) * Ny + j; }

    double dx() const { return 2.0 * Lx / Nx; }
    double dy() const { return 2.0 * Ly / Ny; }
    double area() const { return 4.0 * Lx * Ly; }

    double x(int i) const { return -Lx + i * dx(); }
    double y(int j) const { return -Ly + j * dy(); }

    // Storage index p <-> signed mode number m.
    int mode_x(int p) const { return p < Nx / 2 ? p : p - Nx; }
    int mode_y(int q) const { return q < Ny / 2 ? q : q - Ny; }
    int index_x(int m) const { return m >= 0 ? m : m + Nx; }
    int index_y(int n) const { return n >= 0 ? n : n + Ny; }

    double xi(int p) const { return pi * mode_x(p) / Lx; }
    double lambda(int q) const { return pi * mode_y(q) / Ly; }

    bool is_nyquist(int p, int q) const {
        return mode_x(p) == -Nx / 2 || mode_y(q) == -Ny / 2;
    }

    bool operator==(const Grid2D&) const = default;
};

Grid2D make_grid(double Lx, double Ly, int Nx, int Ny);

} // namespace kpkit
