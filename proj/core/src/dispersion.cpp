#include "kpkit/dispersion.hpp"

#include <cmath>
#include <limits>

namespace kpkit {

JacobianReport jacobian_check(const Grid2D& g) {
    JacobianReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (int p = 0; p < g.Nx; ++p) {
        double xi = g.xi(p);
        for (int q = 0; q < g.Ny; ++q) {
            double lam = g.lambda(q);
            bool in_region =
                xi != 0.0 && std::abs(xi) >= 1.0 &&
                std::abs(xi) >= 2.0 * std::abs(lam) / std::abs(xi);
            if (!in_region) {
                ++rep.points_skipped;
                continue;
            }
            ++rep.points_checked;
            double jac = std::abs(3.0 * xi * xi - lam * lam / (xi * xi));
            rep.min_ratio = std::min(rep.min_ratio, jac / (xi * xi));
        }
    }
    if (rep.points_checked == 0) rep.min_ratio = 0.0;
    rep.holds = rep.points_checked > 0 && rep.min_ratio >= 11.0 / 4.0 - 1e-12;
    return rep;
}

} // namespace kpkit
