#include "kpkit/report_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kpkit {

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string estimate_csv(const EstimateReport& rep) {
    std::ostringstream os;
    os << "sample,seed,grid,lhs,rhs,ratio\n";
    for (const auto& r : rep.rows)
        os << r.sample << ',' << r.seed << ',' << r.grid_n << ',' << fmt17(r.lhs)
           << ',' << fmt17(r.rhs) << ',' << fmt17(r.ratio) << '\n';
    return os.str();
}

std::string estimates_summary_json(const SweepSummary& sweep, std::uint64_t seed) {
    nlohmann::json j;
    j["seed"] = seed;
    j["all_pass"] = sweep.all_pass;
    auto& arr = j["estimates"] = nlohmann::json::array();
    for (const auto& r : sweep.reports) {
        nlohmann::json e;
        e["id"] = r.id;
        e["max_ratio"] = r.max_ratio_fine;
        e["max_ratio_coarse"] = r.max_ratio_coarse;
        e["median_ratio"] = r.median_ratio;
        e["growth"] = r.growth;
        e["resolved"] = r.resolved;
        e["pass"] = r.pass;
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string kernel_csv(const KernelSweepResult& res) {
    std::ostringstream os;
    os << "k,j,t,S_y,S_x,alpha,delta,ratio_y,ratio_x,resolved_fraction,alpha_alt\n";
    for (const auto& b : res.blocks)
        for (const auto& row : b.rows)
            os << row.k << ',' << row.j << ',' << fmt17(row.t) << ','
               << fmt17(row.s_y) << ',' << fmt17(row.s_x) << ',' << fmt17(b.alpha)
               << ',' << fmt17(b.delta) << ',' << fmt17(b.ratio_y) << ','
               << fmt17(b.ratio_x) << ',' << fmt17(row.resolved_fraction) << ','
               << fmt17(b.alpha_alt) << '\n';
    return os.str();
}

std::string kernel_summary_json(const KernelSweepResult& res) {
    nlohmann::json j;
    j["slope_sy_k"] = res.slope_sy_k;
    j["slope_sy_j"] = res.slope_sy_j;
    j["slope_sx_k"] = res.slope_sx_k;
    j["slope_sx_j"] = res.slope_sx_j;
    auto& arr = j["blocks"] = nlohmann::json::array();
    for (const auto& b : res.blocks) {
        nlohmann::json e;
        e["k"] = b.idx.k;
        e["j"] = b.idx.j;
        e["S_y"] = b.s_y;
        e["S_x"] = b.s_x;
        e["alpha"] = b.alpha;
        e["delta"] = b.delta;
        e["alpha_alt"] = b.alpha_alt;
        e["ratio_y"] = b.ratio_y;
        e["ratio_x"] = b.ratio_x;
        e["resolved_fraction"] = b.resolved_fraction;
        e["vdc_applicable"] = b.vdc_applicable;
        e["vdc_ratio"] = b.vdc_ratio;
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string scaling_json(const std::vector<ScalingCheck>& checks) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e;
        e["id"] = c.id;
        e["target"] = c.target;
        e["fitted"] = c.fitted;
        e["max_ratio_dev"] = c.max_ratio_dev;
        j.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string contraction_json(const ContractionReport& rep) {
    nlohmann::json j;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["final_diff"] = rep.final_diff;
    j["max_split_leak"] = rep.max_split_leak;
    auto& arr = j["iterates"] = nlohmann::json::array();
    for (const auto& it : rep.iterates) {
        nlohmann::json e;
        e["iter"] = it.iter;
        e["x_norm_w"] = it.x_norm_w;
        e["y_norm_v"] = it.y_norm_v;
        e["diff"] = it.diff;
        e["ratio"] = it.ratio;
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

NormRecord make_norm_record(const std::string& id,
                            std::vector<std::pair<std::string, double>> params,
                            double value,
                            std::vector<std::pair<std::string, double>> components) {
    return NormRecord{id, std::move(params), value, std::move(components)};
}

std::string norm_records_json(const std::vector<NormRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json e;
        e["id"] = r.id;
        e["value"] = r.value;
        for (const auto& [k, v] : r.params) e["params"][k] = v;
        for (const auto& [k, v] : r.components) e["components"][k] = v;
        arr.push_back(std::move(e));
    }
    return arr.dump(2) + "\n";
}

std::string norm_records_csv(const std::vector<NormRecord>& records) {
    std::ostringstream os;
    os << "id,component,value\n";
    for (const auto& r : records) {
        os << r.id << ",," << fmt17(r.value) << '\n';
        for (const auto& [k, v] : r.components)
            os << r.id << ',' << k << ',' << fmt17(v) << '\n';
    }
    return os.str();
}

std::string trajectory_csv(const TrajectoryField& traj) {
    std::ostringstream os;
    os << "t,x,y,u\n";
    const Grid2D& g = traj.grid;
    for (std::size_t m = 0; m < traj.nt(); ++m)
        for (int i = 0; i < g.Nx; ++i)
            for (int jj = 0; jj < g.Ny; ++jj)
                os << fmt17(traj.times[m]) << ',' << fmt17(g.x(i)) << ','
                   << fmt17(g.y(jj)) << ',' << fmt17(traj.slices[m].at(i, jj))
                   << '\n';
    return os.str();
}

std::string spectral_dump(const TrajectoryField& traj) {
    std::ostringstream os;
    const Grid2D& g = traj.grid;
    for (std::size_t m = 0; m < traj.nt(); ++m) {
        os << "t " << fmt17(traj.times[m]) << '\n';
        SpectralField F = forward_transform(traj.slices[m]);
        for (int p = 0; p < g.Nx; ++p)
            for (int q = 0; q < g.Ny; ++q) {
                cplx c = F.at(p, q);
                if (c == cplx{}) continue;
                os << g.mode_x(p) << ' ' << g.mode_y(q) << ' ' << fmt17(c.real())
                   << ' ' << fmt17(c.imag()) << '\n';
            }
    }
    return os.str();
}

std::string series_csv(const std::string& h1, const std::string& h2,
                       const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size(), "series_csv: column length mismatch");
    std::ostringstream os;
    os << h1 << ',' << h2 << '\n';
    for (std::size_t i = 0; i < a.size(); ++i)
        os << fmt17(a[i]) << ',' << fmt17(b[i]) << '\n';
    return os.str();
}

namespace {

// Minimal PNG encoder: store-mode deflate, enough for small diagnostics.
std::uint32_t crc32_of(const unsigned char* data, std::size_t n, std::uint32_t crc = 0xffffffffu) {
    static std::uint32_t table[256];
    static bool init = [] {
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            table[i] = c;
        }
        return true;
    }();
    (void)init;
    for (std::size_t i = 0; i < n; ++i) crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
    return crc;
}

void push_u32(std::string& s, std::uint32_t v) {
    s.push_back(char((v >> 24) & 0xff));
    s.push_back(char((v >> 16) & 0xff));
    s.push_back(char((v >> 8) & 0xff));
    s.push_back(char(v & 0xff));
}

void push_chunk(std::string& out, const char type[4], const std::string& payload) {
    push_u32(out, std::uint32_t(payload.size()));
    std::string body(type, 4);
    body += payload;
    out += body;
    std::uint32_t crc = crc32_of(reinterpret_cast<const unsigned char*>(body.data()),
                                 body.size()) ^ 0xffffffffu;
    push_u32(out, crc);
}

std::string zlib_store(const std::string& raw) {
    std::string z;
    z.push_back(0x78);
    z.push_back(0x01);
    std::size_t pos = 0;
    while (pos < raw.size() || raw.empty()) {
        std::size_t n = std::min<std::size_t>(65535, raw.size() - pos);
        bool last = pos + n >= raw.size();
        z.push_back(last ? 1 : 0);
        z.push_back(char(n & 0xff));
        z.push_back(char((n >> 8) & 0xff));
        z.push_back(char(~n & 0xff));
        z.push_back(char((~n >> 8) & 0xff));
        z.append(raw, pos, n);
        pos += n;
        if (last) break;
    }
    std::uint32_t a = 1, b = 0;
    for (unsigned char c : raw) {
        a = (a + c) % 65521;
        b = (b + a) % 65521;
    }
    push_u32(z, (b << 16) | a);
    return z;
}

void write_png_gray(const std::string& path, int w, int h,
                    const std::vector<unsigned char>& pix) {
    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    push_u32(ihdr, std::uint32_t(w));
    push_u32(ihdr, std::uint32_t(h));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    push_chunk(out, "IHDR", ihdr);
    std::string raw;
    raw.reserve(std::size_t(h) * (w + 1));
    for (int r = 0; r < h; ++r) {
        raw.push_back(0); // no filter
        raw.append(reinterpret_cast<const char*>(pix.data()) + std::size_t(r) * w, w);
    }
    push_chunk(out, "IDAT", zlib_store(raw));
    push_chunk(out, "IEND", "");
    write_text_file(path, out);
}

} // namespace

void write_png_heatmap(const std::string& path, const PhysicalField& f) {
    const Grid2D& g = f.grid;
    double lo = f.v[0], hi = f.v[0];
    for (double v : f.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi - lo;
    if (span <= 0.0) span = 1.0;
    std::vector<unsigned char> pix(g.size());
    // rows are y (top = +Ly), columns are x
    for (int r = 0; r < g.Ny; ++r)
        for (int c = 0; c < g.Nx; ++c) {
            double v = f.at(c, g.Ny - 1 - r);
            pix[std::size_t(r) * g.Nx + c] =
                static_cast<unsigned char>(255.0 * (v - lo) / span);
        }
    write_png_gray(path, g.Nx, g.Ny, pix);
}

void write_png_histogram(const std::string& path, const std::vector<double>& values) {
    const int w = 256, h = 160, bins = 32;
    std::vector<int> count(bins, 0);
    double lo = 0.0, hi = 0.0;
    for (double v : values) hi = std::max(hi, v);
    if (hi <= lo) hi = 1.0;
    for (double v : values) {
        int b = int((v - lo) / (hi - lo) * bins);
        b = std::min(std::max(b, 0), bins - 1);
        ++count[b];
    }
    int peak = 1;
    for (int c : count) peak = std::max(peak, c);
    std::vector<unsigned char> pix(std::size_t(w) * h, 255);
    int bw = w / bins;
    for (int b = 0; b < bins; ++b) {
        int bh = int(double(count[b]) / peak * (h - 10));
        for (int r = h - bh; r < h; ++r)
            for (int c = b * bw; c < (b + 1) * bw - 1; ++c)
                pix[std::size_t(r) * w + c] = 64;
    }
    write_png_gray(path, w, h, pix);
}

} // namespace kpkit
