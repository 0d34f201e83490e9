#include "kpkit/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "kpkit/parallel.hpp"

namespace kpkit {

double exponent_alpha(int k, int j) {
    if (k >= 0) return 2.5 * k + j;
    return double(j);
}

double exponent_delta(int k, int j) {
    if (k >= std::max(0, j)) return 2.5 * k + j;
    if ((j >= k && k >= 0) || (k < 0 && k >= 2 * j)) return 1.5 * k + 2.0 * j;
    return 2.0 * k + j; // k < min(0, 2j)
}

double exponent_beta(int k, int j) {
    if (k >= j) return 0.5 * k + j;
    return 1.5 * k;
}

double exponent_alpha_alt(int k, int j) {
    double a = 2.0 * k + j;
    double b = j >= 0 ? -2.0 * j : 0.0;
    double c = j >= 0 ? 2.5 * k + j : 0.0;
    return std::max({a, b, c});
}

namespace {

struct GLRule {
    std::vector<double> x, w; // on [-1, 1]
};

GLRule compute_gl(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2.0 * l - 1.0) * z * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

// Budgets snap to a coarse geometric ladder so the rule cache stays small.
int ladder(int n) {
    int v = 64;
    while (v < n) v = v + v / 2;
    return v;
}

const GLRule& gl_rule(int n) {
    static std::map<int, GLRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

struct BlockGeom {
    int k, j;
    double xi_lo, xi_hi, mu_lo, mu_hi, dxi, dmu;
    explicit BlockGeom(DyadicIndex idx)
        : k(idx.k), j(idx.j),
          xi_lo(std::ldexp(1.0, idx.k - 1)), xi_hi(std::ldexp(1.0, idx.k + 1)),
          mu_lo(std::ldexp(1.0, idx.j - 1)), mu_hi(std::ldexp(1.0, idx.j + 1)),
          dxi(xi_hi - xi_lo), dmu(mu_hi - mu_lo) {}
};

double psi_bump(double r) { return BumpProfile{}(r); }

// Worst-case phase cycles along each axis for evaluation points with
// |x| <= xmax, |y| <= ymax.
int raw_xi_budget(const BlockGeom& g, double t, double xmax, double ymax, int qp) {
    double dphi = std::abs(t) * (3.0 * g.xi_hi * g.xi_hi + g.mu_hi * g.mu_hi) +
                  xmax + ymax * g.mu_hi;
    double cycles = g.dxi * dphi / (2.0 * pi);
    return std::max(qp, int(std::ceil(8.0 * cycles)));
}

int raw_mu_budget(const BlockGeom& g, double t, double ymax, int qp) {
    double dphi = g.xi_hi * (2.0 * std::abs(t) * g.mu_hi + ymax);
    double cycles = g.dmu * dphi / (2.0 * pi);
    return std::max(qp, int(std::ceil(8.0 * cycles)));
}

} // namespace

std::pair<int, int> kernel_budget(const KernelEvalSpec& spec, double x, double y) {
    BlockGeom g(spec.idx);
    return {raw_xi_budget(g, spec.t, std::abs(x), std::abs(y), spec.quad_points),
            raw_mu_budget(g, spec.t, std::abs(y), spec.quad_points)};
}

cplx eval_kernel(const KernelEvalSpec& spec, double x, double y) {
    require(std::abs(spec.t) <= 1.0, "eval_kernel: |t| must be <= 1");
    require(spec.quad_points >= 16, "eval_kernel: quadrature points must be >= 16");
    require(spec.s_max >= 8 && spec.r_max >= 8, "eval_kernel: extents must be >= 8");
    auto [n_xi, n_mu] = kernel_budget(spec, x, y);
    require(n_xi <= spec.max_quad_points && n_mu <= spec.max_quad_points,
            "eval_kernel: phase varies too fast for the point budget");

    BlockGeom g(spec.idx);
    const GLRule& rx = gl_rule(n_xi);
    const GLRule& rm = gl_rule(n_mu);
    const double cx = 0.5 * (g.xi_hi + g.xi_lo), hx = 0.5 * (g.xi_hi - g.xi_lo);
    const double cm = 0.5 * (g.mu_hi + g.mu_lo), hm = 0.5 * (g.mu_hi - g.mu_lo);

    cplx acc{};
    for (int s1 : {+1, -1})
        for (int s2 : {+1, -1})
            for (int a = 0; a < n_xi; ++a) {
                double xi = cx + hx * rx.x[a];
                double va = hx * rx.w[a] * psi_bump(std::ldexp(xi, -g.k)) * xi;
                if (va == 0.0) continue;
                double base = s1 * (spec.t * xi * xi * xi + x * xi);
                cplx inner{};
                for (int b = 0; b < n_mu; ++b) {
                    double mu = cm + hm * rm.x[b];
                    double wb = hm * rm.w[b] * psi_bump(std::ldexp(mu, -g.j));
                    double phase = base + s1 * spec.t * xi * mu * mu +
                                   s2 * y * xi * mu;
                    inner += wb * cplx(std::cos(phase), std::sin(phase));
                }
                acc += va * inner;
            }
    return acc;
}

namespace {

// One evaluation axis: uniform segments of samples (recurrence-friendly).
struct AxisSeg {
    int begin = 0, count = 0;
    double c0 = 0.0, dc = 0.0;
};

struct SampleAxis {
    std::vector<double> coord;
    std::vector<AxisSeg> segs;

    void add_segment(double c0, double dc, int count) {
        segs.push_back({int(coord.size()), count, c0, dc});
        for (int i = 0; i < count; ++i) coord.push_back(c0 + i * dc);
    }
};

// y >= 0 (the kernel is even in y). Fine sampling over the summed cells,
// coarse sampling out to the packet reach.
SampleAxis make_y_axis(int s_max, double reach, int spu) {
    SampleAxis ax;
    double fine_hi = s_max + 1.0;
    int nfine = int(fine_hi * spu);
    ax.add_segment(0.0, 1.0 / spu, nfine);
    if (reach > fine_hi) {
        int n = int(std::ceil((reach - fine_hi) * 2.0));
        for (int ofs = 0; ofs < n; ofs += 16)
            ax.add_segment(fine_hi + ofs * 0.5, 0.5, std::min(16, n - ofs));
    }
    return ax;
}

// x runs over both signs (the packet sits on one side of the origin).
SampleAxis make_x_axis(int r_max, double reach, int spu) {
    SampleAxis ax;
    double fine_hi = r_max + 1.0;
    if (reach > fine_hi) {
        int n = int(std::ceil((reach - fine_hi) * 2.0));
        for (int ofs = 0; ofs < n; ofs += 16) {
            int cnt = std::min(16, n - ofs);
            ax.add_segment(-reach + ofs * 0.5, 0.5, cnt);
        }
    }
    int nfine = int(2.0 * fine_hi * spu);
    ax.add_segment(-fine_hi, 1.0 / spu, nfine);
    if (reach > fine_hi) {
        int n = int(std::ceil((reach - fine_hi) * 2.0));
        for (int ofs = 0; ofs < n; ofs += 16)
            ax.add_segment(fine_hi + ofs * 0.5, 0.5, std::min(16, n - ofs));
    }
    return ax;
}

struct TGrid {
    std::vector<double> vals;   // vals[row * nx + col], |I| not yet applied
    std::vector<char> row_ok;   // row resolved under the budget cap
    int nx = 0, ny = 0;
};

// Kernel values on the whole (x, y >= 0) grid for one t. budget_scale 0.5
// gives the half-budget probe used by the convergence check.
TGrid eval_tgrid(const BlockGeom& g, double t, const SampleAxis& xax, const SampleAxis& yax,
                 const KernelSweepConfig& cfg, double budget_scale) {
    TGrid out;
    out.nx = int(xax.coord.size());
    out.ny = int(yax.coord.size());
    out.vals.assign(std::size_t(out.nx) * out.ny, 0.0);
    out.row_ok.assign(out.ny, 1);

    const double xmax = std::max(std::abs(xax.coord.front()), std::abs(xax.coord.back()));

    std::vector<double> args, sn, cs;
    for (const auto& yseg : yax.segs) {
        double ymax = yseg.c0 + (yseg.count - 1) * yseg.dc;
        int raw_mu = raw_mu_budget(g, t, ymax, cfg.quad_points);
        int raw_xi = raw_xi_budget(g, t, xmax, ymax, cfg.quad_points);
        if (raw_mu > cfg.max_quad_points || raw_xi > cfg.max_quad_points) {
            for (int r = 0; r < yseg.count; ++r) out.row_ok[yseg.begin + r] = 0;
            continue;
        }
        int n_mu = ladder(int(std::ceil(raw_mu * budget_scale)));
        int n_xi = ladder(int(std::ceil(raw_xi * budget_scale)));
        const GLRule& rm = gl_rule(n_mu);
        const GLRule& rx = gl_rule(n_xi);
        const double cxm = 0.5 * (g.mu_hi + g.mu_lo), hxm = 0.5 * (g.mu_hi - g.mu_lo);
        const double cxx = 0.5 * (g.xi_hi + g.xi_lo), hxx = 0.5 * (g.xi_hi - g.xi_lo);

        std::vector<double> mu(n_mu), wmu(n_mu);
        for (int b = 0; b < n_mu; ++b) {
            mu[b] = cxm + hxm * rm.x[b];
            wmu[b] = hxm * rm.w[b] * psi_bump(std::ldexp(mu[b], -g.j));
        }
        std::vector<double> xi(n_xi), vxi(n_xi), alpha(n_xi);
        for (int a = 0; a < n_xi; ++a) {
            xi[a] = cxx + hxx * rx.x[a];
            vxi[a] = hxx * rx.w[a] * psi_bump(std::ldexp(xi[a], -g.k)) * xi[a];
            alpha[a] = t * xi[a] * xi[a] * xi[a];
        }

        // c-stage: e_a(row) = sum_b w_b e^{i t xi_a mu_b^2} cos(y xi_a mu_b)
        std::vector<double> e_re(std::size_t(n_xi) * yseg.count);
        std::vector<double> e_im(std::size_t(n_xi) * yseg.count);
        std::vector<double> d_re(n_mu), d_im(n_mu), p_re(n_mu), p_im(n_mu),
            r_re(n_mu), r_im(n_mu);
        args.resize(n_mu);
        sn.resize(n_mu);
        cs.resize(n_mu);
        for (int a = 0; a < n_xi; ++a) {
            if (vxi[a] == 0.0) {
                for (int r = 0; r < yseg.count; ++r)
                    e_re[std::size_t(a) * yseg.count + r] =
                        e_im[std::size_t(a) * yseg.count + r] = 0.0;
                continue;
            }
            for (int b = 0; b < n_mu; ++b) args[b] = t * xi[a] * mu[b] * mu[b];
            for (int b = 0; b < n_mu; ++b) {
                sn[b] = std::sin(args[b]);
                cs[b] = std::cos(args[b]);
            }
            for (int b = 0; b < n_mu; ++b) {
                d_re[b] = wmu[b] * cs[b];
                d_im[b] = wmu[b] * sn[b];
            }
            for (int b = 0; b < n_mu; ++b) args[b] = yseg.c0 * xi[a] * mu[b];
            for (int b = 0; b < n_mu; ++b) {
                p_re[b] = std::cos(args[b]);
                p_im[b] = std::sin(args[b]);
            }
            for (int b = 0; b < n_mu; ++b) args[b] = yseg.dc * xi[a] * mu[b];
            for (int b = 0; b < n_mu; ++b) {
                r_re[b] = std::cos(args[b]);
                r_im[b] = std::sin(args[b]);
            }
            for (int r = 0; r < yseg.count; ++r) {
                double are = 0.0, aim = 0.0;
                for (int b = 0; b < n_mu; ++b) {
                    double cosv = p_re[b];
                    are += d_re[b] * cosv;
                    aim += d_im[b] * cosv;
                    double nr = p_re[b] * r_re[b] - p_im[b] * r_im[b];
                    p_im[b] = p_re[b] * r_im[b] + p_im[b] * r_re[b];
                    p_re[b] = nr;
                }
                e_re[std::size_t(a) * yseg.count + r] = are;
                e_im[std::size_t(a) * yseg.count + r] = aim;
            }
        }

        // x-stage: I(x, y) = 4 sum_a Re(v_a e^{i alpha_a} e_a(y) e^{i x xi_a})
        std::vector<double> f_re(n_xi), f_im(n_xi), q_re(n_xi), q_im(n_xi),
            rho_re(n_xi), rho_im(n_xi);
        for (int r = 0; r < yseg.count; ++r) {
            int row = yseg.begin + r;
            for (int a = 0; a < n_xi; ++a) {
                double ca = std::cos(alpha[a]), sa = std::sin(alpha[a]);
                double er = e_re[std::size_t(a) * yseg.count + r];
                double ei = e_im[std::size_t(a) * yseg.count + r];
                f_re[a] = 4.0 * vxi[a] * (ca * er - sa * ei);
                f_im[a] = 4.0 * vxi[a] * (ca * ei + sa * er);
            }
            for (const auto& xseg : xax.segs) {
                for (int a = 0; a < n_xi; ++a) {
                    double arg = xseg.c0 * xi[a];
                    q_re[a] = std::cos(arg);
                    q_im[a] = std::sin(arg);
                    arg = xseg.dc * xi[a];
                    rho_re[a] = std::cos(arg);
                    rho_im[a] = std::sin(arg);
                }
                for (int c = 0; c < xseg.count; ++c) {
                    double acc = 0.0;
                    for (int a = 0; a < n_xi; ++a) {
                        acc += f_re[a] * q_re[a] - f_im[a] * q_im[a];
                        double nr = q_re[a] * rho_re[a] - q_im[a] * rho_im[a];
                        q_im[a] = q_re[a] * rho_im[a] + q_im[a] * rho_re[a];
                        q_re[a] = nr;
                    }
                    out.vals[std::size_t(row) * out.nx + (xseg.begin + c)] = acc;
                }
            }
        }
    }
    return out;
}

struct CellTrack {
    double sup = 0.0;      // full-budget sup
    double half_at_sup = 0.0;
    bool any = false;
};

} // namespace

KernelBlockResult verify_kernel_bound(DyadicIndex idx, const KernelSweepConfig& cfg) {
    require(cfg.s_max >= 8 && cfg.r_max >= 8, "kernel sweep: extents must be >= 8");
    require(cfg.quad_points >= 16, "kernel sweep: quadrature points must be >= 16");
    for (double t : cfg.t_samples)
        require(t > 0.0 && t <= 1.0, "kernel sweep: t samples must lie in (0, 1]");

    BlockGeom g(idx);
    KernelBlockResult res;
    res.idx = idx;
    res.alpha = exponent_alpha(idx.k, idx.j);
    res.delta = exponent_delta(idx.k, idx.j);
    res.alpha_alt = exponent_alpha_alt(idx.k, idx.j);

    const int n_ycells = cfg.s_max + 1;          // cells [s, s+1), s = 0..s_max
    const int n_xcells = 2 * cfg.r_max + 1;      // cells [r, r+1), r = -r_max..r_max
    std::vector<CellTrack> ycell(n_ycells), xcell(n_xcells);
    double block_max = 0.0, vdc_sup = 0.0;
    bool vdc_applicable = false;

    for (double t : cfg.t_samples) {
        double reach_y = std::min(cfg.y_reach_cap,
                                  std::max(double(cfg.s_max + 1), t * std::ldexp(1.0, idx.j + 2) + 4.0));
        double reach_x = std::min(
            cfg.x_reach_cap,
            std::max(double(cfg.r_max + 1),
                     t * (3.0 * g.xi_hi * g.xi_hi + g.mu_hi * g.mu_hi) + 8.0));
        SampleAxis yax = make_y_axis(cfg.s_max, reach_y, cfg.samples_per_unit);
        SampleAxis xax = make_x_axis(cfg.r_max, reach_x, cfg.samples_per_unit);

        TGrid full = eval_tgrid(g, t, xax, yax, cfg, 1.0);
        TGrid half = eval_tgrid(g, t, xax, yax, cfg, 0.5);

        // Per-t cell sums for the CSV row.
        std::vector<double> ysup(n_ycells, 0.0), xsup(n_xcells, 0.0);
        long rows_ok = 0;
        for (int row = 0; row < full.ny; ++row) {
            if (!full.row_ok[row]) continue;
            ++rows_ok;
            double y = yax.coord[row];
            int yc = int(std::floor(y));
            bool y_in_cells = yc >= 0 && yc < n_ycells;
            for (int col = 0; col < full.nx; ++col) {
                double v = std::abs(full.vals[std::size_t(row) * full.nx + col]);
                double hv = std::abs(half.vals[std::size_t(row) * full.nx + col]);
                block_max = std::max(block_max, v);
                if (t == 1.0) vdc_sup = std::max(vdc_sup, v);
                double x = xax.coord[col];
                if (y_in_cells && v > ysup[yc]) ysup[yc] = v;
                int xc = int(std::floor(x)) + cfg.r_max;
                if (xc >= 0 && xc < n_xcells && x >= -double(cfg.r_max) &&
                    x < cfg.r_max + 1.0 && v > xsup[xc]) xsup[xc] = v;
                if (y_in_cells && v > ycell[yc].sup) {
                    ycell[yc].sup = v;
                    ycell[yc].half_at_sup = hv;
                    ycell[yc].any = true;
                }
                if (xc >= 0 && xc < n_xcells && x >= -double(cfg.r_max) &&
                    x < cfg.r_max + 1.0 && v > xcell[xc].sup) {
                    xcell[xc].sup = v;
                    xcell[xc].half_at_sup = hv;
                    xcell[xc].any = true;
                }
            }
        }
        KernelRow row;
        row.k = idx.k;
        row.j = idx.j;
        row.t = t;
        for (int s = 0; s < n_ycells; ++s)
            row.s_y += (s < cfg.s_max ? 2.0 : 1.0) * ysup[s];
        for (double v : xsup) row.s_x += v;
        row.resolved_fraction = full.ny > 0 ? double(rows_ok) / full.ny : 0.0;
        res.rows.push_back(row);

        // VdC admissibility at t = 1: a stationary xi exists inside the block
        // for some sampled (x, y).
        if (t == 1.0) {
            double lo = 3.0 * g.xi_lo * g.xi_lo - g.mu_hi * g.mu_hi;
            double hi = 3.0 * g.xi_hi * g.xi_hi - g.mu_lo * g.mu_lo;
            if (-reach_x <= hi && lo <= reach_x) vdc_applicable = true;
        }
    }

    // Aggregate over t with the doubling check at every reported cell sup.
    const double floor = 1e-6 * std::max(block_max, 1e-300);
    long cells_total = 0, cells_ok = 0;
    auto resolved = [&](const CellTrack& c) {
        return std::abs(c.sup - c.half_at_sup) <= 1e-4 * std::max(c.sup, floor);
    };
    for (int s = 0; s < n_ycells; ++s) {
        ++cells_total;
        if (!ycell[s].any) continue;
        if (resolved(ycell[s])) {
            ++cells_ok;
            res.s_y += (s < cfg.s_max ? 2.0 : 1.0) * ycell[s].sup;
        }
    }
    for (int r = 0; r < n_xcells; ++r) {
        ++cells_total;
        if (!xcell[r].any) continue;
        if (resolved(xcell[r])) {
            ++cells_ok;
            res.s_x += xcell[r].sup;
        }
    }
    res.resolved_fraction = cells_total > 0 ? double(cells_ok) / cells_total : 0.0;
    res.ratio_y = res.s_y / std::pow(2.0, res.alpha);
    res.ratio_x = res.s_x / std::pow(2.0, res.delta);
    res.vdc_applicable = vdc_applicable;
    res.vdc_ratio = vdc_applicable ? vdc_sup / std::pow(2.0, exponent_beta(idx.k, idx.j)) : 0.0;
    return res;
}

namespace {

double fit_slope_int(const std::vector<int>& ks, const std::vector<double>& ys) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        mx += ks[i];
        my += ys[i];
    }
    mx /= double(ks.size());
    my /= double(ks.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        num += (ks[i] - mx) * (ys[i] - my);
        den += (ks[i] - mx) * (ks[i] - mx);
    }
    return num / den;
}

} // namespace

KernelSweepResult kernel_sweep(int k_lo, int k_hi, int j_lo, int j_hi,
                               const KernelSweepConfig& cfg) {
    require(k_lo <= k_hi && j_lo <= j_hi, "kernel_sweep: empty window");
    std::vector<DyadicIndex> blocks;
    for (int k = k_lo; k <= k_hi; ++k)
        for (int j = j_lo; j <= j_hi; ++j) blocks.push_back({k, j});

    KernelSweepResult out;
    out.blocks.resize(blocks.size());
    parallel_for(blocks.size(), cfg.threads, [&](std::size_t i) {
        out.blocks[i] = verify_kernel_bound(blocks[i], cfg);
    });

    auto slope_along = [&](bool along_k, bool use_sy) {
        std::vector<int> idxs;
        std::vector<double> logs;
        for (const auto& b : out.blocks) {
            int fixed = along_k ? b.idx.j : b.idx.k;
            int fixed_target = along_k ? j_lo : k_lo;
            if (fixed != fixed_target) continue;
            double s = use_sy ? b.s_y : b.s_x;
            if (s <= 0.0) continue;
            idxs.push_back(along_k ? b.idx.k : b.idx.j);
            logs.push_back(std::log2(s));
        }
        if (idxs.size() < 2) return 0.0;
        return fit_slope_int(idxs, logs);
    };
    out.slope_sy_k = slope_along(true, true);
    out.slope_sy_j = slope_along(false, true);
    out.slope_sx_k = slope_along(true, false);
    out.slope_sx_j = slope_along(false, false);
    return out;
}

} // namespace kpkit
