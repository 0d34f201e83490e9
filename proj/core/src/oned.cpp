#include "kpkit/oned.hpp"

#include <cmath>

#include "kpkit/fft.hpp"
#include "kpkit/random_field.hpp"

namespace kpkit {
namespace oned {

std::vector<cplx> forward(const Grid1D& g, const Field1D& f) {
    require(int(f.size()) == g.N, "oned::forward: size mismatch");
    std::vector<cplx> buf(f.begin(), f.end());
    dft1(g.N, buf.data(), -1);
    std::vector<cplx> F(g.N);
    for (int p = 0; p < g.N; ++p) {
        double sgn = (p & 1) ? -1.0 : 1.0;
        F[p] = sgn * buf[p] / double(g.N);
    }
    F[g.N / 2] = 0.0; // Nyquist
    return F;
}

Field1D inverse(const Grid1D& g, const std::vector<cplx>& F) {
    require(int(F.size()) == g.N, "oned::inverse: size mismatch");
    std::vector<cplx> buf(g.N);
    for (int p = 0; p < g.N; ++p) {
        double sgn = (p & 1) ? -1.0 : 1.0;
        buf[p] = sgn * F[p];
    }
    dft1(g.N, buf.data(), +1);
    Field1D f(g.N);
    for (int i = 0; i < g.N; ++i) f[i] = buf[i].real();
    return f;
}

std::vector<cplx> frac_deriv(const Grid1D& g, const std::vector<cplx>& F,
                             double sigma, bool homogeneous) {
    std::vector<cplx> R(g.N);
    for (int p = 0; p < g.N; ++p) {
        double k = std::abs(g.freq(p));
        double w;
        if (homogeneous)
            w = k == 0.0 ? (sigma == 0.0 ? 1.0 : 0.0) : std::pow(k, sigma);
        else
            w = std::pow(1.0 + k, sigma);
        R[p] = w * F[p];
    }
    return R;
}

double l2_norm(const Grid1D& g, const Field1D& f) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s * g.dx());
}

double linf_norm(const Field1D& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

Field1D weight(const Grid1D& g, const Field1D& f, double alpha) {
    Field1D r = f;
    for (int i = 0; i < g.N; ++i)
        r[i] *= std::pow(1.0 + g.x(i) * g.x(i), 0.5 * alpha);
    return r;
}

Field1D random_field(const Grid1D& g, double a, std::uint64_t seed,
                     double amplitude) {
    std::vector<cplx> F(g.N, cplx{});
    for (int m = 1; m < g.N / 2; ++m) {
        double k = pi * m / g.L;
        std::uint64_t h = derive_seed(seed, "1d", std::uint64_t(m));
        // two uniform draws -> one complex gaussian
        double u1 = (double(h >> 11) + 0.5) * 0x1.0p-53;
        std::uint64_t h2 = derive_seed(h, "1d2", 0);
        double u2 = (double(h2 >> 11) + 0.5) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        cplx z(r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2));
        z *= amplitude * std::pow(1.0 + k * k, -0.5 * a) / std::sqrt(2.0);
        F[m] = z;
        F[g.N - m] = std::conj(z);
    }
    return inverse(g, F);
}

} // namespace oned
} // namespace kpkit
