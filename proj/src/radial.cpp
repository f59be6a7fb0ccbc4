#include "slelab/radial.hpp"
#include "slelab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace slelab {

double RadialClock::time_at(double s) const {
    require(s >= 0.0, Guard::bad_argument, "time_at: s >= 0");
    require(reached(s), Guard::not_reached, "time_at: clock ends before s");
    auto it = std::lower_bound(s_grid.begin(), s_grid.end(), s);
    std::size_t k = static_cast<std::size_t>(it - s_grid.begin());
    if (k == 0) return 0.0;
    double s0 = s_grid[k - 1], s1 = s_grid[k];
    double theta = s1 > s0 ? (s - s0) / (s1 - s0) : 1.0;
    return dt * (static_cast<double>(k - 1) + theta);
}

double RadialClock::sample(const std::vector<double>& series, double s) const {
    require(series.size() == s_grid.size(), Guard::bad_argument, "sample: size mismatch");
    require(reached(s), Guard::not_reached, "sample: clock ends before s");
    auto it = std::lower_bound(s_grid.begin(), s_grid.end(), s);
    std::size_t k = static_cast<std::size_t>(it - s_grid.begin());
    if (k == 0) return series[0];
    double s0 = s_grid[k - 1], s1 = s_grid[k];
    double theta = s1 > s0 ? (s - s0) / (s1 - s0) : 1.0;
    return series[k - 1] + theta * (series[k] - series[k - 1]);
}

double RadialClock::sample_log(const std::vector<double>& series, double s) const {
    require(series.size() == s_grid.size(), Guard::bad_argument, "sample_log: size mismatch");
    require(reached(s), Guard::not_reached, "sample_log: clock ends before s");
    auto it = std::lower_bound(s_grid.begin(), s_grid.end(), s);
    std::size_t k = static_cast<std::size_t>(it - s_grid.begin());
    if (k == 0) return std::log(series[0]);
    double s0 = s_grid[k - 1], s1 = s_grid[k];
    double theta = s1 > s0 ? (s - s0) / (s1 - s0) : 1.0;
    double l0 = std::log(series[k - 1]), l1 = std::log(series[k]);
    return l0 + theta * (l1 - l0);
}

RadialClock radial_clock(const LoewnerObservables& obs) {
    RadialClock clock;
    clock.dt = obs.dt;
    std::size_t n = obs.size();
    clock.s_grid.resize(n);
    if (n == 0) return clock;
    clock.s_grid[0] = 0.0;

    // integrand Q/((1-Q) f^2) = v / (gap f^2). The trapezoid degenerates on
    // steps where the gap touches 0 (integrand pole, square-root reflection
    // profile); there the increment is recovered from the pathwise identity
    // d log delta = -a dS, which the slit-step evolution satisfies exactly.
    double gap_floor = 4.0 * std::sqrt(2.0 * obs.a * obs.dt);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double g0 = obs.d_gap[k], g1 = obs.d_gap[k + 1];
        double inc;
        if (std::min(g0, g1) <= gap_floor) {
            inc = std::max(std::log(obs.delta[k] / obs.delta[k + 1]) / obs.a, 0.0);
        } else {
            double i0 = obs.v[k] / (g0 * obs.f[k] * obs.f[k]);
            double i1 = obs.v[k + 1] / (g1 * obs.f[k + 1] * obs.f[k + 1]);
            inc = 0.5 * (i0 + i1) * obs.dt;
        }
        if (inc <= 0.0) clock.stalled = true;
        clock.s_grid[k + 1] = clock.s_grid[k] + inc;
    }
    return clock;
}

namespace {

struct QSdeCoeffs {
    double c0;
    double c1;
};

// The diffusion is stepped in the angular coordinate Q = (1 - cos Z)/2,
// Z in [0, pi], where the noise is additive and both ends are Bessel-like,
// so mirror reflection resolves the boundary layers that Euler-Maruyama in
// Q-coordinates cannot (sqrt diffusivity, integrable density singularity).
// dZ = (ca + cb cos Z)/sin Z ds + dB, ca = 2 c0 - c1, cb = c1 - 1/2.
TiltedPath run_q_sde(const QSdeCoeffs& co, double q0, double ds, double s_max, std::uint64_t seed,
                     std::uint64_t stream, bool absorb_at_floor) {
    require(ds > 0.0 && ds <= 1e-3, Guard::step_too_large, "q_sde: need 0 < ds <= 1e-3");
    require(s_max >= 0.0, Guard::bad_argument, "q_sde: s_max >= 0");
    const double q_floor = 1e-12;
    const double z_floor = 2.0 * std::sqrt(q_floor); // Q ~ Z^2/4 near 0
    const double pi = 3.14159265358979323846264338327950;
    const int max_halvings = 24;
    const double ca = 2.0 * co.c0 - co.c1;
    const double cb = co.c1 - 0.5;

    std::size_t n = static_cast<std::size_t>(std::llround(s_max / ds));
    TiltedPath tp;
    tp.ds = ds;
    tp.seed = seed;
    tp.stream = stream;
    tp.q.resize(n + 1);
    tp.l.resize(n + 1);

    RngStream rng(seed, stream);
    double z = std::acos(1.0 - 2.0 * q0);
    double q = q0, l = 0.0;
    tp.q[0] = q;
    tp.l[0] = 0.0;
    bool dead = false;

    auto drift = [&](double zz) { return (ca + cb * std::cos(zz)) / std::sin(zz); };

    for (std::size_t k = 0; k < n; ++k) {
        if (dead) {
            tp.q[k + 1] = 0.0;
            tp.l[k + 1] = l;
            continue;
        }
        double q_old = q;
        double remaining = ds;
        while (remaining > 0.0) {
            // halve the substep while the drift move is not resolved
            double h = remaining;
            int tries = 0;
            while (tries < max_halvings &&
                   std::fabs(drift(std::clamp(z, z_floor, pi - z_floor))) * h >
                       0.25 * std::min(z, pi - z)) {
                h *= 0.5;
                ++tries;
                ++tp.n_rejected;
            }
            double zc = std::clamp(z, z_floor, pi - z_floor);
            double zn = z + drift(zc) * h + rng.normal() * std::sqrt(h);
            if (zn > pi) zn = 2.0 * pi - zn; // mirror at Q = 1
            if (zn < 0.0) {
                if (absorb_at_floor) {
                    dead = true;
                    tp.absorbed_at = static_cast<long>(k + 1);
                    q = 0.0;
                    break;
                }
                zn = -zn; // mirror at Q = 0 (unreached in the weighted case)
            }
            if (zn < z_floor) {
                if (absorb_at_floor) {
                    dead = true;
                    tp.absorbed_at = static_cast<long>(k + 1);
                    q = 0.0;
                    break;
                }
                zn = z_floor;
                ++tp.n_clamped;
            }
            z = std::min(zn, pi);
            remaining -= h;
        }
        if (!dead) {
            q = 0.5 * (1.0 - std::cos(z));
            if (q < q_floor) q = q_floor;
            l += 0.5 * ((1.0 - q_old) / std::max(q_old, q_floor) + (1.0 - q) / q) * ds;
        }
        tp.q[k + 1] = q;
        tp.l[k + 1] = l;
    }
    return tp;
}

} // namespace

TiltedPath simulate_tilted(const SleParams& p, const SpectrumParams& sp, double ds, double s_max,
                           std::uint64_t seed, std::uint64_t stream) {
    double a = p.a();
    QSdeCoeffs co{1.0 - 2.0 * a - a * p.rho / 2.0 + sp.mu, 1.0 - a + sp.mu};
    double q0 = (p.x - p.x_r) / p.x;
    TiltedPath tp = run_q_sde(co, q0, ds, s_max, seed, stream, false);
    // M_s = (x-x_r)^(-mu(1+rho/2)) e^(-a zeta L_s) Q_s^mu e^(a mu (1+rho/2) s)
    double half = 1.0 + p.rho / 2.0;
    double base = -sp.mu * half * std::log(p.x - p.x_r);
    tp.m_weight.resize(tp.q.size());
    for (std::size_t k = 0; k < tp.q.size(); ++k) {
        double s = tp.s(k);
        tp.m_weight[k] = std::exp(base - a * sp.zeta * tp.l[k] + sp.mu * std::log(tp.q[k]) +
                                  a * sp.mu * half * s);
    }
    return tp;
}

TiltedPath unweighted_q_sde(const SleParams& p, double ds, double s_max, std::uint64_t seed,
                            std::uint64_t stream) {
    double a = p.a();
    QSdeCoeffs co{1.0 - 2.0 * a - a * p.rho / 2.0, 1.0 - a};
    double q0 = (p.x - p.x_r) / p.x;
    return run_q_sde(co, q0, ds, s_max, seed, stream, true);
}

GoodEventResult good_event_indicator(const TiltedPath& tp, const SleParams& p,
                                     const SpectrumParams& sp, const GoodEventParams& gep,
                                     double t_max) {
    require(tp.s(tp.size() - 1) >= t_max, Guard::bad_argument,
            "good_event_indicator: path does not cover t_max");
    double rate = sp.beta * (1.0 + p.rho / 2.0);
    double c = gep.c_const + gep.lambda_boost;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tp.size(); ++k) {
        double s = tp.s(k);
        if (s > t_max) break;
        double band = gep.u * std::sqrt(s) * std::log(2.0 + s) + c;
        margin = std::min(margin, band - std::fabs(tp.l[k] - rate * s));
    }
    return GoodEventResult{margin >= 0.0, margin};
}

double martingale_value_at(const LoewnerObservables& obs, const SpectrumParams& sp,
                           std::size_t k) {
    require(k < obs.size(), Guard::bad_argument, "martingale_value_at: row out of range");
    double half = 1.0 + obs.rho / 2.0;
    return std::exp(sp.zeta * obs.log_gprime[k] + sp.mu * std::log(obs.q[k]) -
                    sp.mu * half * std::log(obs.delta[k]));
}

double martingale_value(const LoewnerObservables& obs, const SpectrumParams& sp, double t) {
    require(!obs.swallow_time || t < *obs.swallow_time, Guard::swallowed_point,
            "martingale_value: t past the swallowing time");
    std::size_t k = static_cast<std::size_t>(std::llround(t / obs.dt));
    return martingale_value_at(obs, sp, k);
}

double c_star(double a, double x, double x_r) {
    double log4 = std::log(4.0);
    double upper = (std::log(x) + log4) / a;
    double lower = x > x_r ? (log4 - std::log(x - x_r)) / a : upper;
    return std::max(upper, lower);
}

} // namespace slelab
