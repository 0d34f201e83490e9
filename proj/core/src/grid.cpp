#include "kpkit/grid.hpp"

namespace kpkit {

Grid2D make_grid(double Lx, double Ly, int Nx, int Ny) {
    require(Lx > 0.0, "make_grid: Lx must be positive");
    require(Ly > 0.0, "make_grid: Ly must be positive");
    require(Nx >= 8 && Nx % 2 == 0, "make_grid: Nx must be even and >= 8");
    require(Ny >= 8 && Ny % 2 == 0, "make_grid: Ny must be even and >= 8");
    return Grid2D{Lx, Ly, Nx, Ny};
}

} // namespace kpkit
