#include "slelab/estimators.hpp"
#include "slelab/parallel.hpp"
#include "slelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slelab {

const char* to_string(MomentMethod m) {
    switch (m) {
        case MomentMethod::direct: return "direct";
        case MomentMethod::tilted: return "tilted";
        case MomentMethod::exact: return "exact";
    }
    return "?";
}

namespace {

std::vector<MomentEstimate> moment_exact(const SleParams& p, const SpectrumParams& sp,
                                         const std::vector<double>& s_values, int n_terms) {
    QDiffusionSpec spec = QDiffusionSpec::make(p, sp, n_terms);
    double q0 = (p.x - p.x_r) / p.x;
    double rate = p.a() * sp.mu * (1.0 + p.rho / 2.0);
    std::vector<MomentEstimate> out;
    for (double s : s_values) {
        double em = s > 0.0 ? moment_inv_mu(spec, s, q0, n_terms) : std::pow(q0, -sp.mu);
        MomentEstimate e;
        e.s = s;
        e.value = std::pow(q0, sp.mu) * std::exp(-rate * s) * em;
        e.stderr_ = 0.0;
        e.n_paths = 0;
        e.method = MomentMethod::exact;
        out.push_back(e);
    }
    return out;
}

std::vector<MomentEstimate> moment_tilted(const SleParams& p, const SpectrumParams& sp,
                                          const std::vector<double>& s_values, long n_paths,
                                          const MomentOptions& opt, std::uint64_t seed) {
    double s_max = *std::max_element(s_values.begin(), s_values.end());
    double q0 = (p.x - p.x_r) / p.x;
    double rate = p.a() * sp.mu * (1.0 + p.rho / 2.0);
    std::size_t ns = s_values.size();

    std::vector<double> slot(static_cast<std::size_t>(n_paths) * ns);
    parallel_paths(static_cast<std::size_t>(n_paths), opt.workers, [&](std::size_t i) {
        TiltedPath tp = simulate_tilted(p, sp, opt.ds, s_max, seed, i);
        for (std::size_t j = 0; j < ns; ++j) {
            std::size_t k = static_cast<std::size_t>(std::llround(s_values[j] / opt.ds));
            k = std::min(k, tp.size() - 1);
            slot[i * ns + j] = std::pow(tp.q[k], -sp.mu);
        }
    });

    std::vector<MomentEstimate> out;
    for (std::size_t j = 0; j < ns; ++j) {
        double mean = 0.0, m2 = 0.0;
        for (long i = 0; i < n_paths; ++i) {
            double w = slot[static_cast<std::size_t>(i) * ns + j];
            double d = w - mean;
            mean += d / static_cast<double>(i + 1);
            m2 += d * (w - mean);
        }
        double var = n_paths > 1 ? m2 / static_cast<double>(n_paths - 1) : 0.0;
        double pref = std::pow(q0, sp.mu) * std::exp(-rate * s_values[j]);
        MomentEstimate e;
        e.s = s_values[j];
        e.value = pref * mean;
        e.stderr_ = pref * std::sqrt(var / static_cast<double>(n_paths));
        e.n_paths = n_paths;
        e.method = MomentMethod::tilted;
        out.push_back(e);
    }
    return out;
}

std::vector<MomentEstimate> moment_direct(const SleParams& p, const SpectrumParams& sp,
                                          const std::vector<double>& s_values, long n_paths,
                                          const MomentOptions& opt, std::uint64_t seed) {
    std::size_t ns = s_values.size();
    std::vector<double> slot(static_cast<std::size_t>(n_paths) * ns, 0.0);
    std::vector<unsigned char> reached(static_cast<std::size_t>(n_paths) * ns, 0);

    parallel_paths(static_cast<std::size_t>(n_paths), opt.workers, [&](std::size_t i) {
        DriverPath driver = simulate_driver(p, opt.dt, opt.t_max, seed, i);
        LoewnerObservables obs = evolve_observables(driver, p.x);
        RadialClock clock = radial_clock(obs);
        // Paths are censored where the series ends, whether at t_max or at a
        // resolution-level collapse onto the point; the clock's divergence
        // into a genuine approach is already captured by its last steps.
        for (std::size_t j = 0; j < ns; ++j) {
            double s = s_values[j];
            if (!clock.reached(s)) continue;
            slot[i * ns + j] = std::exp(sp.zeta * clock.sample(obs.log_gprime, s));
            reached[i * ns + j] = 1;
        }
    });

    std::vector<MomentEstimate> out;
    for (std::size_t j = 0; j < ns; ++j) {
        double mean = 0.0, m2 = 0.0;
        long survivors = 0;
        for (long i = 0; i < n_paths; ++i) {
            double w = slot[static_cast<std::size_t>(i) * ns + j];
            survivors += reached[static_cast<std::size_t>(i) * ns + j];
            double d = w - mean;
            mean += d / static_cast<double>(i + 1);
            m2 += d * (w - mean);
        }
        require(survivors >= opt.min_survivors, Guard::insufficient_survivors,
                "one_point_moment: fewer than the required paths reach radial time s");
        double var = n_paths > 1 ? m2 / static_cast<double>(n_paths - 1) : 0.0;
        MomentEstimate e;
        e.s = s_values[j];
        e.value = mean;
        e.stderr_ = std::sqrt(var / static_cast<double>(n_paths));
        e.n_paths = n_paths;
        e.method = MomentMethod::direct;
        out.push_back(e);
    }
    return out;
}

} // namespace

std::vector<MomentEstimate> one_point_moment(const SleParams& p, const SpectrumParams& sp,
                                             const std::vector<double>& s_values, long n_paths,
                                             MomentMethod method, const MomentOptions& opt,
                                             std::uint64_t seed) {
    require(!s_values.empty(), Guard::bad_argument, "one_point_moment: empty s grid");
    switch (method) {
        case MomentMethod::exact: return moment_exact(p, sp, s_values, opt.n_terms);
        case MomentMethod::tilted: return moment_tilted(p, sp, s_values, n_paths, opt, seed);
        case MomentMethod::direct: return moment_direct(p, sp, s_values, n_paths, opt, seed);
    }
    fail(Guard::bad_argument, "one_point_moment: unknown method");
}

ExponentFit exponent_fit(const std::vector<MomentEstimate>& series) {
    require(series.size() >= 5, Guard::bad_argument, "exponent_fit: need >= 5 points");
    bool identical = true;
    for (const auto& e : series) identical = identical && (e.value == series.front().value);
    require(!identical, Guard::degenerate_fit, "exponent_fit: all values identical");

    std::vector<double> x, y, w;
    bool any_stderr = false;
    for (const auto& e : series) any_stderr = any_stderr || e.stderr_ > 0.0;
    for (const auto& e : series) {
        require(e.value > 0.0, Guard::degenerate_fit, "exponent_fit: nonpositive value");
        x.push_back(e.s);
        y.push_back(std::log(e.value));
        if (any_stderr && e.stderr_ > 0.0) {
            double r = e.value / e.stderr_;
            w.push_back(r * r);
        } else {
            w.push_back(1.0);
        }
    }
    if (any_stderr) {
        // cap so an exact point cannot dominate a noisy series
        double wmax = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (series[i].stderr_ > 0.0) wmax = std::max(wmax, w[i]);
        if (wmax > 0.0)
            for (auto& wi : w) wi = std::min(wi, wmax);
    }
    LineFit f = fit_line(x, y, w);
    return ExponentFit{f.slope, f.intercept, f.r2};
}

namespace {

struct BoxGrid {
    std::vector<double> midpoints;
    std::vector<int> level;        // n of each midpoint
    std::vector<double> thr_delta; // e^{-(n-2)}
    std::vector<double> thr_upper; // c e^{-beta(1+rho/2)(n-2)}
    std::vector<double> s_lower;   // n/a + C*(x_j)
    std::vector<double> thr_lg;    // log(C2) - beta(1+rho/2) n
    std::vector<long> grid_size;   // per level n
};

BoxGrid make_grid(const SleParams& p, const SpectrumParams& sp, int n_lo, int n_hi,
                  const BoxCountOptions& opt) {
    BoxGrid grid;
    double a = p.a();
    double rate = sp.beta * (1.0 + p.rho / 2.0);
    for (int n = n_lo; n <= n_hi; ++n) {
        double len = std::exp(-static_cast<double>(n)) / 2.0;
        long cnt = static_cast<long>(std::ceil(2.0 * std::exp(static_cast<double>(n))));
        grid.grid_size.push_back(cnt);
        double c = opt.c_prime * std::exp(-2.0 * rate);
        for (long j = 0; j < cnt; ++j) {
            double xj = 1.0 + (static_cast<double>(j) + 0.5) * len;
            grid.midpoints.push_back(xj);
            grid.level.push_back(n);
            grid.thr_delta.push_back(std::exp(-static_cast<double>(n - 2)));
            grid.thr_upper.push_back(c * std::exp(-rate * static_cast<double>(n - 2)));
            grid.s_lower.push_back(static_cast<double>(n) / a + c_star(a, xj, p.x_r));
            grid.thr_lg.push_back(std::log(opt.c2_lower) - rate * static_cast<double>(n));
        }
    }
    return grid;
}

struct PathCounts {
    std::vector<long> upper;
    std::vector<long> lower;
};

// One driver path, all midpoints evolved together. The force-point image
// is shared; per-point v is tracked multiplicatively as in
// evolve_observables. Returns per-level counts.
PathCounts box_count_path(const SleParams& p, const BoxGrid& grid, int n_lo, int n_hi,
                          const BoxCountOptions& opt, std::uint64_t seed, std::uint64_t stream) {
    DriverPath driver = simulate_driver(p, opt.dt, opt.t_max, seed, stream);
    std::size_t npts = grid.midpoints.size();
    double a = p.a();
    double dt = opt.dt;
    const double gap_floor = 4.0 * std::sqrt(2.0 * a * dt);

    std::vector<double> g(grid.midpoints), gp(npts, 1.0), vv(npts), spr(npts, 0.0),
        iprev(npts, 0.0);
    std::vector<unsigned char> done_upper(npts, 0), done_lower(npts, 0), alive(npts, 1);
    std::vector<unsigned char> hit_upper(npts, 0), hit_lower(npts, 0);
    for (std::size_t j = 0; j < npts; ++j) vv[j] = grid.midpoints[j] - p.x_r;

    double vimg = p.x_r;
    double gap_prev = p.x_r;

    std::size_t nsteps = driver.size() - 1;
    for (std::size_t k = 0; k < nsteps; ++k) {
        double wbar = 0.5 * (driver.w[k] + driver.w[k + 1]);
        double wn = driver.w[k + 1];

        // shared force-point image step, with the sqrt(2 a dt) rebound when
        // the image is absorbed within the step
        double uv0 = vimg - wbar;
        double uv1;
        bool rebound = uv0 <= 0.0, resync = false;
        if (rebound)
            uv1 = std::sqrt(2.0 * a * dt);
        else
            uv1 = std::sqrt(uv0 * uv0 + 2.0 * a * dt);
        vimg = wbar + uv1;
        if (vimg - wn <= 0.0) {
            vimg = wn;
            resync = true;
        }
        double gap = vimg - wn; // 0 when resyncing

        for (std::size_t j = 0; j < npts; ++j) {
            if (!alive[j]) continue;
            double u0 = g[j] - wbar;
            if (u0 <= 0.0) {
                // swallowed: delta collapses, both targets get resolved
                if (!done_upper[j]) {
                    done_upper[j] = 1;
                    hit_upper[j] = gp[j] >= grid.thr_upper[j];
                }
                if (!done_lower[j]) {
                    done_lower[j] = 1;
                    hit_lower[j] = 1;
                }
                alive[j] = 0;
                continue;
            }
            double u1 = std::sqrt(u0 * u0 + 2.0 * a * dt);
            double gn = wbar + u1;
            double gpn = gp[j] * (u0 / u1);
            double f = gn - wn;
            double v = resync ? f : (rebound ? u1 - uv1 : vv[j] * ((u0 + uv0) / (u1 + uv1)));
            if (f <= 0.0 || v <= 0.0) {
                if (!done_upper[j]) {
                    done_upper[j] = 1;
                    hit_upper[j] = gpn >= grid.thr_upper[j];
                }
                if (!done_lower[j]) {
                    done_lower[j] = 1;
                    hit_lower[j] = 1;
                }
                alive[j] = 0;
                continue;
            }
            double icur = gap > gap_floor ? v / (gap * f * f) : 0.0;
            double sinc;
            if (std::min(gap_prev, gap) <= gap_floor) {
                // pole step: use the exact d log delta = -a dS route
                sinc = std::max((std::log(vv[j] / v) - std::log(u0 / u1)) / a, 0.0);
            } else {
                sinc = 0.5 * (iprev[j] + icur) * dt;
            }
            double s_new = spr[j] + sinc;

            if (!done_lower[j] && s_new >= grid.s_lower[j]) {
                double lg_prev = std::log(gp[j]);
                double lg_cur = std::log(gpn);
                double theta = s_new > spr[j] ? (grid.s_lower[j] - spr[j]) / (s_new - spr[j]) : 1.0;
                double lg = lg_prev + theta * (lg_cur - lg_prev);
                done_lower[j] = 1;
                hit_lower[j] = lg <= grid.thr_lg[j];
            }
            if (!done_upper[j] && v <= grid.thr_delta[j] * gpn) {
                done_upper[j] = 1;
                hit_upper[j] = gpn >= grid.thr_upper[j];
            }
            g[j] = gn;
            gp[j] = gpn;
            vv[j] = v;
            spr[j] = s_new;
            iprev[j] = icur;
            if (done_upper[j] && done_lower[j]) alive[j] = 0;
        }
        gap_prev = gap;
    }

    PathCounts pc;
    pc.upper.assign(n_hi - n_lo + 1, 0);
    pc.lower.assign(n_hi - n_lo + 1, 0);
    for (std::size_t j = 0; j < npts; ++j) {
        int lev = grid.level[j] - n_lo;
        pc.upper[lev] += hit_upper[j];
        pc.lower[lev] += hit_lower[j];
    }
    return pc;
}

} // namespace

std::vector<BoxCountReport> box_count_range(const SleParams& p, const SpectrumParams& sp, int n_lo,
                                            int n_hi, long n_paths, const BoxCountOptions& opt,
                                            std::uint64_t seed) {
    require(1 <= n_lo && n_lo <= n_hi && n_hi <= 10, Guard::bad_argument,
            "box_count_range: need 1 <= n_lo <= n_hi <= 10");
    require(n_paths >= 1, Guard::bad_argument, "box_count_range: n_paths >= 1");
    BoxGrid grid = make_grid(p, sp, n_lo, n_hi, opt);
    int nlev = n_hi - n_lo + 1;

    std::vector<long> slots(static_cast<std::size_t>(n_paths) * nlev * 2);
    parallel_paths(static_cast<std::size_t>(n_paths), opt.workers, [&](std::size_t i) {
        PathCounts pc = box_count_path(p, grid, n_lo, n_hi, opt, seed, i);
        for (int l = 0; l < nlev; ++l) {
            slots[(i * nlev + l) * 2] = pc.upper[l];
            slots[(i * nlev + l) * 2 + 1] = pc.lower[l];
        }
    });

    std::vector<BoxCountReport> out(nlev);
    for (int l = 0; l < nlev; ++l) {
        double su = 0.0, sl = 0.0;
        for (long i = 0; i < n_paths; ++i) {
            su += static_cast<double>(slots[(static_cast<std::size_t>(i) * nlev + l) * 2]);
            sl += static_cast<double>(slots[(static_cast<std::size_t>(i) * nlev + l) * 2 + 1]);
        }
        BoxCountReport& r = out[l];
        r.n = n_lo + l;
        r.count_upper = su / static_cast<double>(n_paths);
        r.count_lower = sl / static_cast<double>(n_paths);
        r.grid_size = grid.grid_size[l];
        r.beta = sp.beta;
        r.resolution_ok = std::exp(-static_cast<double>(r.n)) >= 10.0 * std::sqrt(opt.dt);
    }
    return out;
}

BoxCountReport box_count(const SleParams& p, const SpectrumParams& sp, int n, long n_paths,
                         const BoxCountOptions& opt, std::uint64_t seed) {
    return box_count_range(p, sp, n, n, n_paths, opt, seed).front();
}

AuditReport distortion_audit(const SleParams& p, long n_paths, const AuditOptions& opt,
                             std::uint64_t seed) {
    std::size_t nt = static_cast<std::size_t>(opt.t_samples);
    std::size_t nx = opt.x_values.size();
    std::size_t per_path = nt * nx;

    struct Slot {
        AuditSample s;
        bool valid = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_paths) * per_path);

    parallel_paths(static_cast<std::size_t>(n_paths), opt.workers, [&](std::size_t i) {
        DriverPath driver = simulate_driver(p, opt.dt, opt.t_max, seed, i);
        TracePolyline trace = trace_points(driver, opt.eps);
        std::size_t n = trace.pts.size();
        for (std::size_t xi = 0; xi < nx; ++xi) {
            double x = opt.x_values[xi];
            if (x <= p.x_r) continue;
            SleParams px = p;
            px.x = x;
            LoewnerObservables obs = evolve_observables(driver, x);
            double ratio = (x - p.x_r) / (4.0 * x);

            double best = std::numeric_limits<double>::infinity();
            double slack = 0.0;
            std::size_t next_sample = 0;
            for (std::size_t k = 0; k < n && next_sample < nt; ++k) {
                double d = std::abs(trace.pts[k] - std::complex<double>(x, 0.0));
                if (d < best) {
                    best = d;
                    double gap = 0.0;
                    if (k > 0) gap = std::max(gap, std::abs(trace.pts[k] - trace.pts[k - 1]));
                    if (k + 1 < n) gap = std::max(gap, std::abs(trace.pts[k + 1] - trace.pts[k]));
                    slack = gap + 2.0 * opt.eps;
                }
                double t_here = trace.dt * static_cast<double>(k);
                double t_want = opt.t_max * static_cast<double>(next_sample + 1) / static_cast<double>(nt);
                if (t_here + 0.5 * trace.dt < t_want) continue;
                // sample at this grid time
                if (k < obs.size() && (!obs.swallow_time || t_here < *obs.swallow_time)) {
                    AuditSample a;
                    a.t = t_here;
                    a.x = x;
                    a.delta = obs.delta[k];
                    a.dist = best;
                    a.dist_slack = slack;
                    a.harm_len = obs.g[k] - obs.o[k];
                    a.gprime = std::exp(obs.log_gprime[k]);
                    double dist_lo = std::max(best - slack, 0.0);
                    a.dist_ok = !(a.delta > 4.0 * best || a.delta < ratio * dist_lo);
                    a.koebe_ok =
                        !(a.harm_len > 4.0 * a.gprime * best || a.harm_len < 0.25 * a.gprime * dist_lo);
                    Slot& sl = slots[i * per_path + xi * nt + next_sample];
                    sl.s = a;
                    sl.valid = true;
                }
                ++next_sample;
            }
        }
    });

    AuditReport rep;
    for (const auto& sl : slots) {
        if (!sl.valid) continue;
        ++rep.n_samples;
        rep.dist_violations += sl.s.dist_ok ? 0 : 1;
        rep.koebe_violations += sl.s.koebe_ok ? 0 : 1;
        if (opt.keep_samples) rep.samples.push_back(sl.s);
    }
    return rep;
}

} // namespace slelab
