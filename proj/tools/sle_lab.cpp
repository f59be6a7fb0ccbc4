#include "slelab/estimators.hpp"
#include "slelab/io.hpp"
#include "slelab/parallel.hpp"
#include "slelab/qdiff.hpp"
#include "slelab/quadrature.hpp"
#include "slelab/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace slelab;

namespace {

struct RunConfig {
    std::string command;
    double kappa = 2.0;
    double rho = -1.5;
    double x = 1.0;
    double x_r = 0.0;
    double zeta = 0.0;
    double beta = 0.0;
    bool has_zeta = false;
    bool has_beta = false;
    double dt = 1e-4;
    double ds = 1e-3;
    double s_max = 8.0;
    double t_max = 12.0;
    double t = 1.0;    // qdiff evaluation time
    double eps = 1e-3; // trace tolerance
    long n_paths = 1000;
    int n_terms = 64;
    int n_grid = 8;
    int n_min = 3;
    std::string method = "exact";
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = ".";
    bool trace = false;
};

json config_echo(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["kappa"] = c.kappa;
    j["rho"] = c.rho;
    j["x"] = c.x;
    j["x_r"] = c.x_r;
    if (c.has_beta)
        j["beta"] = c.beta;
    else
        j["zeta"] = c.zeta;
    j["dt"] = c.dt;
    j["ds"] = c.ds;
    j["s_max"] = c.s_max;
    j["t_max"] = c.t_max;
    j["t"] = c.t;
    j["eps"] = c.eps;
    j["n_paths"] = c.n_paths;
    j["n_terms"] = c.n_terms;
    j["n_grid"] = c.n_grid;
    j["n_min"] = c.n_min;
    j["method"] = c.method;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir;
    j["trace"] = c.trace;
    return j;
}

// JSON config file provides defaults; command-line flags override.
void apply_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read config file " + path);
    json j = json::parse(in);
    auto num = [&](const char* k, double& dst) {
        if (j.contains(k)) dst = j[k].get<double>();
    };
    num("kappa", c.kappa);
    num("rho", c.rho);
    num("x", c.x);
    num("x_r", c.x_r);
    if (j.contains("zeta")) {
        c.zeta = j["zeta"].get<double>();
        c.has_zeta = true;
    }
    if (j.contains("beta")) {
        c.beta = j["beta"].get<double>();
        c.has_beta = true;
    }
    num("dt", c.dt);
    num("ds", c.ds);
    num("s_max", c.s_max);
    num("t_max", c.t_max);
    num("t", c.t);
    num("eps", c.eps);
    if (j.contains("n_paths")) c.n_paths = j["n_paths"].get<long>();
    if (j.contains("n_terms")) c.n_terms = j["n_terms"].get<int>();
    if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<int>();
    if (j.contains("n_min")) c.n_min = j["n_min"].get<int>();
    if (j.contains("method")) c.method = j["method"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("trace")) c.trace = j["trace"].get<bool>();
}

// partial outputs are removed unless the run commits
struct OutputGuard {
    std::vector<std::string> files;
    bool committed = false;
    void add(const std::string& f) { files.push_back(f); }
    ~OutputGuard() {
        if (committed) return;
        for (const auto& f : files) {
            std::error_code ec;
            fs::remove(f, ec);
        }
    }
};

json derived_params(const SleParams& p, const SpectrumParams& sp) {
    json d;
    d["a"] = p.a();
    d["mu_c"] = sp.mu_c;
    d["zeta"] = sp.zeta;
    d["mu"] = sp.mu;
    d["beta"] = sp.beta;
    d["mu_c_nonpositive"] = sp.mu_c_nonpositive;
    DimSpectrum ds = dim_spectrum(p, sp.beta);
    d["d_beta"] = ds.d;
    d["d_star"] = ds.d_star;
    d["beta_minus"] = ds.beta_minus;
    d["beta_plus"] = ds.beta_plus;
    d["beta_zero"] = ds.beta_zero;
    d["d_beta0"] = dim_d(p, ds.beta_zero);
    QDiffusionSpec spec = QDiffusionSpec::make(p, sp, 4);
    d["delta_plus"] = spec.delta_plus;
    d["delta_minus"] = spec.delta_minus;
    d["K"] = one_point_prefactor(p, sp);
    return d;
}

void run_spectrum(const RunConfig& c, const SleParams& p, const SpectrumParams& sp,
                  OutputGuard& guard, json& summary) {
    DimSpectrum ds = dim_spectrum(p, sp.beta);
    int n = std::max(c.n_grid, 2);
    double lo = 0.8 * ds.beta_minus, hi = 1.1 * ds.beta_plus;
    std::string path = c.out_dir + "/spectrum.csv";
    guard.add(path);
    std::ofstream out(path, std::ios::binary);
    out << "beta,d,d_star\n";
    for (int i = 0; i < n; ++i) {
        double b = lo + (hi - lo) * i / (n - 1);
        out << fmt17(b) << ',' << fmt17(dim_d(p, b)) << ','
            << fmt17(dim_d_star(p, b / (1.0 + p.rho / 2.0))) << '\n';
    }
    out.close();

    SpectrumParams back = spectrum_params_from_beta(p, sp.beta);
    summary["checks"]["zeta_beta_roundtrip"] = std::fabs(back.zeta - sp.zeta) < 1e-12;
    summary["checks"]["d_equals_d_star"] = std::fabs(ds.d - ds.d_star) < 1e-12;
}

void run_simulate(const RunConfig& c, const SleParams& p, OutputGuard& guard, json& summary) {
    DriverPath d = simulate_driver(p, c.dt, c.t_max, c.seed, 0);
    std::string path = c.out_dir + "/simulate.csv";
    guard.add(path);
    write_driver_csv(path, d);
    summary["non_hitting_regime"] = d.non_hitting_regime;

    LoewnerObservables obs = evolve_observables(d, p.x);
    std::string opath = c.out_dir + "/observables.csv";
    guard.add(opath);
    write_observables_csv(opath, obs);
    if (obs.swallow_time) summary["swallow_time"] = *obs.swallow_time;
    if (c.trace) {
        TracePolyline tr = trace_points(d, c.eps);
        std::string tpath = c.out_dir + "/trace.csv";
        guard.add(tpath);
        write_trace_csv(tpath, tr);
    }
}

void run_moment(const RunConfig& c, const SleParams& p, const SpectrumParams& sp,
                OutputGuard& guard, json& summary) {
    MomentMethod m;
    if (c.method == "direct")
        m = MomentMethod::direct;
    else if (c.method == "tilted")
        m = MomentMethod::tilted;
    else if (c.method == "exact")
        m = MomentMethod::exact;
    else
        fail(Guard::bad_argument, "moment: --method must be direct|tilted|exact");

    std::vector<double> s_values;
    for (int i = 1; i <= c.n_grid; ++i) s_values.push_back(c.s_max * i / c.n_grid);
    MomentOptions opt;
    opt.dt = c.dt;
    opt.ds = c.ds;
    opt.t_max = c.t_max;
    opt.n_terms = c.n_terms;
    opt.workers = c.workers;
    auto series = one_point_moment(p, sp, s_values, c.n_paths, m, opt, c.seed);

    std::string path = c.out_dir + "/moment.csv";
    guard.add(path);
    write_moments_csv(path, series);

    if (m == MomentMethod::tilted) {
        // one sample path of the weighted diffusion for inspection
        TiltedPath tp = simulate_tilted(p, sp, c.ds, c.s_max, c.seed, 0);
        std::string tpath = c.out_dir + "/tilted.csv";
        guard.add(tpath);
        write_tilted_csv(tpath, tp);
    }

    double target = -p.a() * sp.mu * (1.0 + p.rho / 2.0);
    double q0 = (p.x - p.x_r) / p.x;
    double k_pref = one_point_prefactor(p, sp) * std::pow(q0, sp.mu);
    summary["fit"]["theory_slope"] = target;
    summary["fit"]["theory_prefactor"] = k_pref;
    if (series.size() >= 5) {
        ExponentFit fit = exponent_fit(series);
        summary["fit"]["slope"] = fit.slope;
        summary["fit"]["intercept"] = fit.intercept;
        summary["fit"]["r2"] = fit.r2;
        summary["checks"]["slope_within_10pct"] =
            std::fabs(fit.slope - target) < 0.1 * std::fabs(target);
    }
}

void run_qdiff(const RunConfig& c, const SleParams& p, const SpectrumParams& sp,
               OutputGuard& guard, json& summary) {
    QDiffusionSpec spec = QDiffusionSpec::make(p, sp, c.n_terms);
    double q0 = (p.x - p.x_r) / p.x;
    int n = std::max(c.n_grid, 2);
    std::vector<double> ys, ps;
    bool warn = false;
    for (int i = 1; i <= n; ++i) {
        double y = static_cast<double>(i) / (n + 1);
        bool w = false;
        ys.push_back(y);
        ps.push_back(transition_density(spec, c.t, q0, y, c.n_terms, &w));
        warn = warn || w;
    }
    std::string path = c.out_dir + "/qdiff.csv";
    guard.add(path);
    write_density_csv(path, ys, ps);

    double mass = interval_mass(spec, c.t, q0, 0.0, 1.0, c.n_terms);
    summary["truncation_warning"] = warn;
    summary["normalization"] = mass;
    summary["checks"]["normalized_1e-8"] = std::fabs(mass - 1.0) < 1e-8;
    summary["stationary_moment_inv_mu"] = stationary_moment_inv_mu(spec);
    summary["lambda_1"] = eigenvalue(spec, 1);
}

void run_boxdim(const RunConfig& c, const SleParams& p, const SpectrumParams& sp,
                OutputGuard& guard, json& summary) {
    int n_hi = std::max(c.n_grid, c.n_min);
    BoxCountOptions opt;
    opt.dt = c.dt;
    opt.t_max = c.t_max;
    opt.workers = c.workers;
    auto reports = box_count_range(p, sp, c.n_min, n_hi, c.n_paths, opt, c.seed);

    std::string path = c.out_dir + "/boxdim.csv";
    guard.add(path);
    write_boxcount_csv(path, reports);

    bool res_ok = true;
    std::vector<double> ns, lc;
    for (const auto& r : reports) {
        res_ok = res_ok && r.resolution_ok;
        if (r.count_upper > 0.0) {
            ns.push_back(r.n);
            lc.push_back(std::log(r.count_upper));
        }
    }
    summary["resolution_ok"] = res_ok;
    if (ns.size() >= 2) {
        std::vector<double> w(ns.size(), 1.0);
        LineFit f = fit_line(ns, lc, w);
        summary["fit"]["exponent"] = f.slope;
        summary["fit"]["r2"] = f.r2;
        DimSpectrum dsd = dim_spectrum(p, sp.beta);
        summary["fit"]["d_beta0"] = dim_d(p, dsd.beta_zero);
        summary["fit"]["expected_exponent"] =
            1.0 + (sp.zeta * sp.beta - sp.mu) * (1.0 + p.rho / 2.0);
    }
}

void run_audit(const RunConfig& c, const SleParams& p, OutputGuard& guard, json& summary) {
    AuditOptions opt;
    opt.dt = c.dt;
    opt.eps = c.eps;
    opt.t_max = c.t_max;
    opt.t_samples = std::max(c.n_grid, 1);
    opt.workers = c.workers;
    AuditReport rep = distortion_audit(p, c.n_paths, opt, c.seed);

    std::string path = c.out_dir + "/audit.csv";
    guard.add(path);
    write_audit_csv(path, rep);

    summary["n_samples"] = rep.n_samples;
    summary["dist_violation_rate"] = rep.dist_violation_rate();
    summary["koebe_violation_rate"] = rep.koebe_violation_rate();
    summary["checks"]["dist_below_0.1pct"] = rep.dist_violation_rate() < 1e-3;
    summary["checks"]["koebe_below_0.1pct"] = rep.koebe_violation_rate() < 1e-3;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig c;

    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(c, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            }
        }

    CLI::App app{"chordal SLE_kappa(rho) laboratory: drivers, observables, spectra"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--kappa", c.kappa, "SLE parameter kappa > 0");
        sub->add_option("--rho", c.rho, "force point weight, rho > -2");
        sub->add_option("--x", c.x, "tracked boundary point");
        sub->add_option("--x-r", c.x_r, "force point location >= 0");
        auto* z = sub->add_option("--zeta", c.zeta, "derivative weight exponent");
        auto* b = sub->add_option("--beta", c.beta, "decay-rate parameter (alternative to zeta)");
        z->excludes(b);
        b->excludes(z);
        sub->add_option("--dt", c.dt, "capacity-time step");
        sub->add_option("--ds", c.ds, "radial-time step");
        sub->add_option("--s-max", c.s_max, "largest radial time");
        sub->add_option("--t-max", c.t_max, "capacity-time horizon");
        sub->add_option("--n-paths", c.n_paths, "Monte Carlo paths");
        sub->add_option("--n-terms", c.n_terms, "spectral expansion order");
        sub->add_option("--n-grid", c.n_grid, "grid size (s points / table rows / levels)");
        sub->add_option("--seed", c.seed, "RNG seed");
        sub->add_option("--workers", c.workers, "worker threads (SLE_LAB_THREADS overrides)");
        sub->add_option("--out-dir", c.out_dir, "output directory");
        return sub;
    };

    add_common(app.add_subcommand("spectrum", "closed-form exponents and d(beta)"));
    auto* sim_cmd = add_common(app.add_subcommand("simulate", "driver + observables sample path"));
    sim_cmd->add_flag("--trace", c.trace, "also extract the trace polyline");
    sim_cmd->add_option("--eps", c.eps, "trace tip tolerance");
    auto* mom_cmd = add_common(app.add_subcommand("moment", "one-point derivative moments"));
    mom_cmd->add_option("--method", c.method, "direct|tilted|exact");
    auto* qd_cmd = add_common(app.add_subcommand("qdiff", "spectral transition density table"));
    qd_cmd->add_option("--t", c.t, "evaluation time of the transition density");
    auto* box_cmd = add_common(app.add_subcommand("boxdim", "covering counts on [1,2]"));
    box_cmd->add_option("--n-min", c.n_min, "smallest covering level");
    auto* aud_cmd = add_common(app.add_subcommand("audit", "distortion sandwich audit"));
    aud_cmd->add_option("--eps", c.eps, "trace tip tolerance");

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("SLE_LAB_THREADS")) c.workers = std::atoi(env);

    CLI::App* picked = app.get_subcommands().front();
    c.command = picked->get_name();
    bool beta_given = c.has_beta || picked->count("--beta") > 0;

    auto t0 = std::chrono::steady_clock::now();
    json summary;
    OutputGuard guard;
    try {
        SleParams p = SleParams::make(c.kappa, c.rho, c.x, c.x_r);
        SpectrumParams sp =
            beta_given ? spectrum_params_from_beta(p, c.beta) : spectrum_params(p, c.zeta);
        c.has_beta = beta_given;
        c.has_zeta = !beta_given;
        c.beta = sp.beta;
        c.zeta = sp.zeta;
        std::error_code ec;
        fs::create_directories(c.out_dir, ec);

        summary["config"] = config_echo(c);
        summary["derived"] = derived_params(p, sp);

        if (c.command == "spectrum")
            run_spectrum(c, p, sp, guard, summary);
        else if (c.command == "simulate")
            run_simulate(c, p, guard, summary);
        else if (c.command == "moment")
            run_moment(c, p, sp, guard, summary);
        else if (c.command == "qdiff")
            run_qdiff(c, p, sp, guard, summary);
        else if (c.command == "boxdim")
            run_boxdim(c, p, sp, guard, summary);
        else if (c.command == "audit")
            run_audit(c, p, guard, summary);
    } catch (const SleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        bool validation = e.kind == Guard::bad_argument || e.kind == Guard::zeta_out_of_range ||
                          e.kind == Guard::step_too_large;
        return validation ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    auto t1 = std::chrono::steady_clock::now();
    summary["wall_time_seconds"] = std::chrono::duration<double>(t1 - t0).count();

    std::string spath = c.out_dir + "/summary.json";
    std::ofstream out(spath, std::ios::binary);
    out << summary.dump(2) << "\n";
    out.close();
    guard.committed = true;
    return 0;
}
