#pragma once

#include <cstdint>

#include "kpkit/common.hpp"

namespace kpkit {
namespace oned {

/// Periodic 1-D lattice on [-L, L), N even samples; used by the appendix
/// checks (fractional Leibniz rule and the weight commutator).
struct Grid1D {
    double L = pi;
    int N = 256;
    double dx() const { return 2.0 * L / N; }
    double x(int i) const { return -L + i * dx(); }
    double freq(int p) const { return pi * (p < N / 2 ? p : p - N) / L; }
};

using Field1D = std::vector<double>;

std::vector<cplx> forward(const Grid1D& g, const Field1D& f);
Field1D inverse(const Grid1D& g, const std::vector<cplx>& F);

/// D^sigma (|k|^sigma) or (1+D)^sigma ((1+|k|)^sigma).
std::vector<cplx> frac_deriv(const Grid1D& g, const std::vector<cplx>& F,
                             double sigma, bool homogeneous);

double l2_norm(const Grid1D& g, const Field1D& f);
double linf_norm(const Field1D& f);

Field1D weight(const Grid1D& g, const Field1D& f, double alpha);

/// Smooth mean-zero random field with coefficient decay <k>^-a.
Field1D random_field(const Grid1D& g, double a, std::uint64_t seed,
                     double amplitude = 1.0);

} // namespace oned
} // namespace kpkit
