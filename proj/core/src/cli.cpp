#include "kpkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpkit/parallel.hpp"
#include "kpkit/report_io.hpp"

namespace kpkit {
namespace cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
    // grid
    double Lx = 2.0 * pi, Ly = 2.0 * pi;
    int Nx = 64, Ny = 64;
    // solver
    double T = 0.25, beta = 1.0, tol = 1e-10, epsilon = 0.05;
    int max_iter = 25, M = 128;
    Nonlinearity nonlinearity = Nonlinearity::kp_quadratic;
    double z0_scale = 1e-3;
    double data_decay_a = 8.0, data_decay_b = 8.0;
    int reference_dt_divisor = 512;
    // ensemble
    std::uint64_t seed = 20260808;
    int samples = 50;
    std::vector<std::pair<double, double>> decay_profiles{{2.0, 2.0}, {3.0, 1.5}, {1.5, 3.0}};
    double ensemble_L = 16.0;
    int ensemble_n = 64;
    int time_samples = 64;
    // sweep
    std::vector<std::string> estimates; // empty = full catalog
    int k_lo = -3, k_hi = 4, j_lo = -3, j_hi = 4;
    std::vector<double> t_samples{1.0, 0.25, 0.0625, 0.015625, 0.00390625};
    int s_max = 8, r_max = 8, quad_points = 64, max_quad_points = 20000;
    // output
    std::string out_dir = "out";
    bool plots = false;
    int threads = default_threads();
};

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw invalid_input("config error at " + path + ": " + what);
}

template <typename T>
T field_as(const json& j, const std::string& section, const std::string& key,
           T fallback) {
    if (!j.contains(section) || !j[section].contains(key)) return fallback;
    try {
        return j[section][key].get<T>();
    } catch (const std::exception&) {
        config_error(section + "." + key, "wrong type");
    }
}

RunConfig load_config(const std::string& path) {
    RunConfig c;
    if (path.empty()) return c;
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw invalid_input(std::string("config parse error: ") + e.what());
    }

    c.Lx = field_as(j, "grid", "Lx", c.Lx);
    c.Ly = field_as(j, "grid", "Ly", c.Ly);
    c.Nx = field_as(j, "grid", "Nx", c.Nx);
    c.Ny = field_as(j, "grid", "Ny", c.Ny);

    c.T = field_as(j, "solver", "T", c.T);
    c.beta = field_as(j, "solver", "beta", c.beta);
    c.tol = field_as(j, "solver", "tol", c.tol);
    c.max_iter = field_as(j, "solver", "max_iter", c.max_iter);
    c.M = field_as(j, "solver", "M", c.M);
    c.epsilon = field_as(j, "solver", "epsilon", c.epsilon);
    c.z0_scale = field_as(j, "solver", "z0_scale", c.z0_scale);
    c.reference_dt_divisor =
        field_as(j, "solver", "reference_dt_divisor", c.reference_dt_divisor);
    std::string nl = field_as<std::string>(j, "solver", "nonlinearity", "kp_quadratic");
    if (nl == "kp_quadratic")
        c.nonlinearity = Nonlinearity::kp_quadratic;
    else if (nl == "mkp_cubic")
        c.nonlinearity = Nonlinearity::mkp_cubic;
    else
        config_error("solver.nonlinearity", "must be kp_quadratic or mkp_cubic");
    if (j.contains("solver") && j["solver"].contains("data_decay")) {
        auto d = j["solver"]["data_decay"];
        if (!d.is_array() || d.size() != 2) config_error("solver.data_decay", "need [a, b]");
        c.data_decay_a = d[0].get<double>();
        c.data_decay_b = d[1].get<double>();
    }

    c.seed = field_as(j, "ensemble", "seed", c.seed);
    c.samples = field_as(j, "ensemble", "samples", c.samples);
    c.ensemble_L = field_as(j, "ensemble", "L", c.ensemble_L);
    c.ensemble_n = field_as(j, "ensemble", "N", c.ensemble_n);
    c.time_samples = field_as(j, "ensemble", "time_samples", c.time_samples);
    if (j.contains("ensemble") && j["ensemble"].contains("decay_profiles")) {
        c.decay_profiles.clear();
        for (const auto& p : j["ensemble"]["decay_profiles"]) {
            if (!p.is_array() || p.size() != 2)
                config_error("ensemble.decay_profiles", "entries must be [a, b]");
            c.decay_profiles.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        if (c.decay_profiles.empty())
            config_error("ensemble.decay_profiles", "must not be empty");
    }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (s.contains("estimates"))
            for (const auto& e : s["estimates"]) {
                std::string id = e.get<std::string>();
                if (id != "all") c.estimates.push_back(id);
            }
        if (s.contains("kernel_window")) {
            const auto& w = s["kernel_window"];
            c.k_lo = w.value("k_lo", c.k_lo);
            c.k_hi = w.value("k_hi", c.k_hi);
            c.j_lo = w.value("j_lo", c.j_lo);
            c.j_hi = w.value("j_hi", c.j_hi);
        }
        if (s.contains("t_samples")) {
            c.t_samples.clear();
            for (const auto& t : s["t_samples"]) c.t_samples.push_back(t.get<double>());
        }
        c.s_max = s.value("s_max", c.s_max);
        c.r_max = s.value("r_max", c.r_max);
        c.quad_points = s.value("quad_points", c.quad_points);
        c.max_quad_points = s.value("max_quad_points", c.max_quad_points);
    }

    c.out_dir = field_as<std::string>(j, "output", "directory", c.out_dir);
    c.plots = field_as(j, "output", "plots", c.plots);
    return c;
}

void validate_grid(const RunConfig& c) {
    if (c.Lx <= 0.0) config_error("grid.Lx", "must be positive");
    if (c.Ly <= 0.0) config_error("grid.Ly", "must be positive");
    if (c.Nx < 8 || c.Nx % 2 != 0) config_error("grid.Nx", "must be even and >= 8");
    if (c.Ny < 8 || c.Ny % 2 != 0) config_error("grid.Ny", "must be even and >= 8");
}

void validate_solver(const RunConfig& c) {
    if (c.T <= 0.0) config_error("solver.T", "must be positive");
    if (c.tol <= 0.0) config_error("solver.tol", "must be positive");
    if (c.M < 8) config_error("solver.M", "must be >= 8");
    if (c.max_iter < 1) config_error("solver.max_iter", "must be >= 1");
    if (c.epsilon <= 0.0) config_error("solver.epsilon", "must be positive");
    if (c.reference_dt_divisor < c.M || c.reference_dt_divisor % c.M != 0)
        config_error("solver.reference_dt_divisor", "must be a multiple of solver.M");
}

PhysicalField solve_initial_data(const RunConfig& c, const Grid2D& g) {
    SpectrumSpec sp;
    sp.a = c.data_decay_a;
    sp.b = c.data_decay_b;
    sp.seed = c.seed;
    PhysicalField u0 = random_field(sp, g);
    double z0 = z0_norm(u0, c.epsilon).total;
    require(z0 > 0.0, "solve: initial data is identically zero");
    return (c.z0_scale / z0) * u0;
}

int cmd_solve(const RunConfig& c) {
    validate_grid(c);
    validate_solver(c);
    Grid2D g = make_grid(c.Lx, c.Ly, c.Nx, c.Ny);
    PhysicalField u0 = solve_initial_data(c, g);

    PicardConfig pc;
    pc.T = c.T;
    pc.beta = c.beta;
    pc.tol = c.tol;
    pc.max_iter = c.max_iter;
    pc.M = c.M;
    pc.epsilon = c.epsilon;
    pc.nonlinearity = c.nonlinearity;

    fs::create_directories(c.out_dir);
    PicardResult res;
    try {
        res = picard_solve(u0, pc);
    } catch (const DivergenceError& e) {
        ContractionReport rep;
        rep.iterates = e.history;
        write_text_file(c.out_dir + "/contraction.json", contraction_json(rep));
        std::cerr << "solve: " << e.what() << "\n";
        return 3;
    }

    TrajectoryField ref;
    try {
        ref = reference_integrate(u0, c.T, c.T / c.reference_dt_divisor,
                                  pc.sign, c.beta, c.nonlinearity,
                                  c.reference_dt_divisor / c.M);
    } catch (const std::runtime_error& e) {
        std::cerr << "solve: " << e.what() << "\n";
        return 3;
    }

    auto resid = pde_residual(res.u, pc.sign, c.beta, c.nonlinearity);
    auto l2_ref = l2_series(ref);
    double drift = 0.0;
    for (double v : l2_ref) drift = std::max(drift, std::abs(v - l2_ref[0]));
    drift /= std::max(l2_ref[0], 1e-300);
    double agree = 0.0, ref_scale = 0.0;
    for (std::size_t m = 0; m < res.u.nt(); ++m) {
        agree = std::max(agree, l2_norm(res.u.slices[m] - ref.slices[m]));
        ref_scale = std::max(ref_scale, l2_norm(ref.slices[m]));
    }
    agree /= std::max(ref_scale, 1e-300);

    if (g.size() <= 64 * 64)
        write_text_file(c.out_dir + "/trajectory.csv", trajectory_csv(res.u));
    write_text_file(c.out_dir + "/trajectory_spectral.txt", spectral_dump(res.u));
    write_text_file(c.out_dir + "/contraction.json", contraction_json(res.report));
    write_text_file(c.out_dir + "/residual.csv",
                    series_csv("t", "residual_l2", resid.times, resid.residual_l2));
    write_text_file(c.out_dir + "/conservation.csv",
                    series_csv("t", "l2", ref.times, l2_ref));

    json summary;
    summary["converged"] = res.report.converged;
    summary["iterations"] = res.report.iterations;
    summary["rel_residual"] = resid.rel_residual;
    summary["l2_drift"] = drift;
    summary["picard_vs_reference"] = agree;
    summary["z0_scale"] = c.z0_scale;
    write_text_file(c.out_dir + "/solve_summary.json", summary.dump(2) + "\n");

    // flat norm records for the data and the final state
    std::vector<NormRecord> recs;
    auto z0r = z0_norm(u0, c.epsilon);
    std::vector<std::pair<std::string, double>> z0comp;
    for (std::size_t i = 0; i < z0r.components.size(); ++i)
        z0comp.emplace_back("c" + std::to_string(i), z0r.components[i]);
    recs.push_back(make_norm_record("z0(u0)", {{"epsilon", c.epsilon}}, z0r.total,
                                    std::move(z0comp)));
    XNormParams prm = XNormParams::from_epsilon(c.epsilon);
    SpectralField Ufin = forward_transform(res.u.slices.back());
    TrajectoryField wtraj = make_trajectory(
        g, {0.0, 1.0},
        {inverse_transform(project_Q(Ufin)), inverse_transform(project_Q(Ufin))});
    auto xb = x_norm_full(wtraj, prm);
    recs.push_back(make_norm_record("x_norm(Qu(T))", {{"epsilon", c.epsilon}},
                                    xb.value, xb.components));
    write_text_file(c.out_dir + "/norms.json", norm_records_json(recs));
    write_text_file(c.out_dir + "/norms.csv", norm_records_csv(recs));

    if (c.plots) {
        write_png_heatmap(c.out_dir + "/u_initial.png", res.u.slices.front());
        write_png_heatmap(c.out_dir + "/u_final.png", res.u.slices.back());
    }
    std::cout << "solve: converged=" << (res.report.converged ? "yes" : "no")
              << " iterations=" << res.report.iterations
              << " rel_residual=" << fmt17(resid.rel_residual)
              << " picard_vs_reference=" << fmt17(agree) << "\n";
    return res.report.converged ? 0 : 1;
}

int cmd_check_estimates(const RunConfig& c) {
    for (const auto& id : c.estimates) {
        const auto& cat = estimate_catalog();
        if (std::find(cat.begin(), cat.end(), id) == cat.end()) {
            std::cerr << "unknown estimate id: " << id << "\nknown ids:\n";
            for (const auto& known : cat) std::cerr << "  " << known << "\n";
            return 2;
        }
    }
    EstimateConfig ec;
    ec.seed = c.seed;
    ec.samples = c.samples;
    ec.decay_profiles = c.decay_profiles;
    ec.epsilon = c.epsilon;
    ec.Lx = c.ensemble_L;
    ec.Ly = c.ensemble_L;
    ec.coarse_n = c.ensemble_n;
    ec.time_samples = c.time_samples;
    ec.threads = c.threads;

    SweepSummary sweep = run_all_estimates(ec, c.estimates);
    fs::create_directories(c.out_dir);
    for (const auto& rep : sweep.reports) {
        write_text_file(c.out_dir + "/estimate_" + rep.id + ".csv", estimate_csv(rep));
        if (c.plots) {
            std::vector<double> ratios;
            for (const auto& r : rep.rows) ratios.push_back(r.ratio);
            write_png_histogram(c.out_dir + "/estimate_" + rep.id + ".png", ratios);
        }
        std::cout << (rep.pass ? "pass " : "FAIL ") << rep.id
                  << " max_ratio=" << fmt17(rep.max_ratio_fine)
                  << " growth=" << fmt17(rep.growth) << "\n";
    }
    write_text_file(c.out_dir + "/estimates_summary.json",
                    estimates_summary_json(sweep, c.seed));
    return sweep.all_pass ? 0 : 1;
}

int cmd_kernel_sweep(const RunConfig& c) {
    KernelSweepConfig kc;
    kc.t_samples = c.t_samples;
    kc.s_max = c.s_max;
    kc.r_max = c.r_max;
    kc.quad_points = c.quad_points;
    kc.max_quad_points = c.max_quad_points;
    kc.threads = c.threads;

    KernelSweepResult res = kernel_sweep(c.k_lo, c.k_hi, c.j_lo, c.j_hi, kc);
    fs::create_directories(c.out_dir);
    write_text_file(c.out_dir + "/kernel_sweep.csv", kernel_csv(res));
    write_text_file(c.out_dir + "/kernel_summary.json", kernel_summary_json(res));
    std::cout << "kernel sweep: slope(S_y, k)=" << fmt17(res.slope_sy_k)
              << " slope(S_y, j)=" << fmt17(res.slope_sy_j) << "\n";

    bool pass;
    if (c.k_lo >= 0 && c.j_lo >= 0) {
        pass = true;
        if (c.k_hi > c.k_lo) pass = pass && std::abs(res.slope_sy_k - 2.5) <= 0.5;
        if (c.j_hi > c.j_lo) pass = pass && std::abs(res.slope_sy_j - 1.0) <= 0.5;
        for (const auto& b : res.blocks) pass = pass && b.resolved_fraction == 1.0;
    } else {
        pass = true;
        for (const auto& b : res.blocks) pass = pass && b.resolved_fraction > 0.0;
    }
    return pass ? 0 : 1;
}

int cmd_scaling(const RunConfig& c) {
    validate_grid(c);
    Grid2D g = make_grid(c.Lx, c.Ly, c.Nx, c.Ny);
    SpectrumSpec sp;
    sp.a = 3.0;
    sp.b = 3.0;
    sp.seed = c.seed;
    PhysicalField u = random_field(sp, g);
    auto checks = scaling_checks(u, {0.5, 0.25, 0.125, 0.0625});
    fs::create_directories(c.out_dir);
    write_text_file(c.out_dir + "/scaling.json", scaling_json(checks));
    bool pass = true;
    for (const auto& chk : checks) {
        bool weighted = chk.id.rfind("w_", 0) == 0;
        double tol = weighted ? 0.02 * std::abs(chk.target) : 1e-10;
        bool ok = std::abs(chk.fitted - chk.target) <= tol;
        pass = pass && ok;
        std::cout << (ok ? "pass " : "FAIL ") << chk.id << " target="
                  << fmt17(chk.target) << " fitted=" << fmt17(chk.fitted) << "\n";
    }
    return pass ? 0 : 1;
}

int cmd_report(const RunConfig& c) {
    json merged;
    bool any = false;
    for (const char* name : {"estimates_summary.json", "kernel_summary.json",
                             "scaling.json", "solve_summary.json"}) {
        fs::path p = fs::path(c.out_dir) / name;
        if (!fs::exists(p)) continue;
        std::ifstream in(p);
        json j;
        try {
            in >> j;
        } catch (const std::exception&) {
            continue;
        }
        merged[fs::path(name).stem().string()] = std::move(j);
        any = true;
    }
    if (!any) {
        std::cerr << "report: no summaries found under " << c.out_dir << "\n";
        return 2;
    }
    write_text_file(c.out_dir + "/report.json", merged.dump(2) + "\n");
    std::cout << "report: merged summaries written to " << c.out_dir
              << "/report.json\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"spectral toolkit for the KP equations"};
    app.require_subcommand(1);

    std::string config_path, out_dir, grid_override;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    app.add_option("--config", config_path, "declarative run configuration (JSON)");
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--threads", threads, "worker threads (default: all cores)");
    app.add_option("--grid", grid_override, "grid override, NxN or N");

    auto* solve = app.add_subcommand("solve", "run the split Picard solver");
    auto* est = app.add_subcommand("check-estimates", "run the estimate catalog");
    auto* ker = app.add_subcommand("kernel-sweep", "dyadic kernel bound sweep");
    auto* sca = app.add_subcommand("scaling", "rescaling exponent fits");
    auto* rep = app.add_subcommand("report", "merge summary JSONs");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    seed_set = seed_opt->count() > 0;

    try {
        RunConfig c = load_config(config_path);
        if (!out_dir.empty()) c.out_dir = out_dir;
        if (seed_set) c.seed = seed;
        if (threads > 0) c.threads = threads;
        if (!grid_override.empty()) {
            int n = 0, n2 = 0;
            auto xpos = grid_override.find('x');
            if (xpos == std::string::npos) {
                n = n2 = std::stoi(grid_override);
            } else {
                n = std::stoi(grid_override.substr(0, xpos));
                n2 = std::stoi(grid_override.substr(xpos + 1));
            }
            c.Nx = n;
            c.Ny = n2;
            c.ensemble_n = n;
        }

        if (solve->parsed()) return cmd_solve(c);
        if (est->parsed()) return cmd_check_estimates(c);
        if (ker->parsed()) return cmd_kernel_sweep(c);
        if (sca->parsed()) return cmd_scaling(c);
        if (rep->parsed()) return cmd_report(c);
        return 2;
    } catch (const invalid_input& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DivergenceError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cli
} // namespace kpkit
