#pragma once

#include "kpkit/grid.hpp"

namespace kpkit {

/// gamma = -1 selects KP-I (weak dispersion), gamma = +1 KP-II.
enum class DispersionSign : int { kp1 = -1, kp2 = +1 };

inline double gamma_of(DispersionSign s) { return double(int(s)); }

/// phi(xi, lambda) = xi^3 - gamma*lambda^2/xi for xi != 0, and 0 on the
/// xi = 0 line (those modes carry no energy under the zero-x-mean convention).
inline double dispersion_phi(double xi, double lambda, DispersionSign s) {
    if (xi == 0.0) return 0.0;
    return xi * xi * xi - gamma_of(s) * lambda * lambda / xi;
}

struct JacobianReport {
    double min_ratio = 0.0; // min over region of |3 xi^2 - lambda^2/xi^2| / xi^2
    long points_checked = 0;
    long points_skipped = 0;
    bool holds = false;     // min_ratio >= 11/4 - 1e-12
};

/// Scans the lattice region |xi| >= max(1, 2|lambda|/|xi|) where the
/// change of variables zeta = phi(xi, lambda) is used, and verifies the
/// lower Jacobian bound |3 xi^2 - lambda^2/xi^2| >= (11/4) xi^2.
JacobianReport jacobian_check(const Grid2D& g);

} // namespace kpkit
