#include "kpkit/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace kpkit {

namespace {

std::mutex plan_mutex;

fftw_plan plan2(int nx, int ny, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(nx, ny, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> dummy(std::size_t(nx) * ny);
    auto* d = reinterpret_cast<fftw_complex*>(dummy.data());
    fftw_plan p = fftw_plan_dft_2d(nx, ny, d, d, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

fftw_plan plan1(int n, int sign) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> dummy(n);
    auto* d = reinterpret_cast<fftw_complex*>(dummy.data());
    fftw_plan p = fftw_plan_dft_1d(n, d, d, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

} // namespace

void dft2(const Grid2D& g, std::vector<cplx>& data, int sign) {
    fftw_plan p = plan2(g.Nx, g.Ny, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, d, d);
}

void dft1(int n, cplx* data, int sign) {
    fftw_plan p = plan1(n, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

SpectralField forward_transform(const PhysicalField& f) {
    const Grid2D& g = f.grid;
    for (double x : f.v)
        require(std::isfinite(x), "forward_transform: non-finite sample");

    std::vector<cplx> buf(g.size());
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = f.v[k];
    dft2(g, buf, FFTW_FORWARD);

    // (-1)^{p+q} phase moves the spatial origin to the domain center.
    SpectralField F(g, true);
    const double scale = 1.0 / double(g.size());
    for (int p = 0; p < g.Nx; ++p)
        for (int q = 0; q < g.Ny; ++q) {
            double sgn = ((p + q) & 1) ? -1.0 : 1.0;
            F.at(p, q) = sgn * scale * buf[g.at(p, q)];
        }
    for (int p = 0; p < g.Nx; ++p) F.at(p, g.Ny / 2) = 0.0;
    for (int q = 0; q < g.Ny; ++q) F.at(g.Nx / 2, q) = 0.0;
    return F;
}

PhysicalField inverse_transform(const SpectralField& F) {
    require(F.real_symmetric,
            "inverse_transform: field does not represent a real function");
    const Grid2D& g = F.grid;
    std::vector<cplx> buf(g.size());
    for (int p = 0; p < g.Nx; ++p)
        for (int q = 0; q < g.Ny; ++q) {
            double sgn = ((p + q) & 1) ? -1.0 : 1.0;
            buf[g.at(p, q)] = sgn * F.at(p, q);
        }
    dft2(g, buf, FFTW_BACKWARD);
    PhysicalField f(g);
    for (std::size_t k = 0; k < buf.size(); ++k) f.v[k] = buf[k].real();
    return f;
}

void project_zero_xmean(SpectralField& F) {
    for (int q = 0; q < F.grid.Ny; ++q) F.at(0, q) = 0.0;
}

double zero_xmean_energy_fraction(const SpectralField& F) {
    double col = 0.0;
    for (int q = 0; q < F.grid.Ny; ++q) col += std::norm(F.at(0, q));
    double tot = energy(F);
    return tot == 0.0 ? 0.0 : col / tot;
}

SpectralField embed(const SpectralField& F, const Grid2D& fine) {
    const Grid2D& g = F.grid;
    require(fine.Lx == g.Lx && fine.Ly == g.Ly,
            "embed: target grid must share the domain");
    require(fine.Nx >= g.Nx && fine.Ny >= g.Ny, "embed: target grid too small");
    SpectralField R(fine, F.real_symmetric);
    for (int p = 0; p < g.Nx; ++p) {
        int m = g.mode_x(p);
        if (m == -g.Nx / 2) continue;
        for (int q = 0; q < g.Ny; ++q) {
            int n = g.mode_y(q);
            if (n == -g.Ny / 2) continue;
            R.mode(m, n) = F.at(p, q);
        }
    }
    return R;
}

} // namespace kpkit
