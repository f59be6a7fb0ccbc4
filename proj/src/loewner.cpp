#include "slelab/loewner.hpp"

#include <algorithm>
#include <cmath>

namespace slelab {

void slit_step(double& g, double& gp, double w, double a, double dtau) {
    require(dtau >= 0.0, Guard::bad_argument, "slit_step: dtau >= 0");
    double u0 = g - w;
    require(u0 > 0.0, Guard::swallowed, "slit_step: point at or left of the driver");
    double u = std::sqrt(u0 * u0 + 2.0 * a * dtau);
    g = w + u;
    gp *= u0 / u;
}

std::complex<double> slit_step_complex(std::complex<double> g, double w, double a, double dtau) {
    std::complex<double> u0 = g - w;
    std::complex<double> u = std::sqrt(u0 * u0 + 2.0 * a * dtau);
    if (u.imag() < 0.0) u = -u;
    return w + u;
}

LoewnerObservables evolve_observables(const DriverPath& driver, double x) {
    require(driver.v.size() == 1, Guard::bad_argument,
            "evolve_observables: one-force-point driver required");
    double x_r = driver.v[0][0];
    require(x > x_r, Guard::bad_argument, "evolve_observables: need x > x_r");

    double a = driver.a;
    double dt = driver.dt;
    std::size_t n = driver.size();
    const double swallow_eps = 1e-9 * (x - x_r);
    const double o_offset = 1e-9 * x;

    LoewnerObservables obs;
    obs.x = x;
    obs.x_r = x_r;
    obs.a = a;
    obs.rho = driver.rho;
    obs.dt = dt;
    obs.f.reserve(n);

    // The force-point image is evolved by the same slit maps as g, with
    // reflection at the driver, and v = g - V is updated multiplicatively
    // with the exact constant-driver factor (u_g0+u_V0)/(u_g1+u_V1); this
    // keeps v accurate in relative terms when v << f.
    double g = x, lg = 0.0, o = o_offset;
    double vimg = x_r;
    double v = x - x_r;
    auto push = [&](std::size_t k, double gv, double lgv, double vv, double ov, double gap) {
        double w = driver.w[k];
        double fv = gv - w;
        obs.g.push_back(gv);
        obs.f.push_back(fv);
        obs.log_gprime.push_back(lgv);
        obs.v.push_back(vv);
        obs.delta.push_back(vv * std::exp(-lgv));
        obs.q.push_back(std::clamp(fv > 0.0 ? vv / fv : 0.0, 0.0, 1.0));
        obs.o.push_back(ov);
        obs.d_gap.push_back(gap);
    };
    push(0, g, lg, v, o, x_r);

    for (std::size_t k = 0; k + 1 < n; ++k) {
        double wbar = 0.5 * (driver.w[k] + driver.w[k + 1]);
        double wn = driver.w[k + 1];
        double ug0 = g - wbar;
        if (ug0 <= 0.0) {
            obs.swallow_time = obs.t(k);
            obs.rightmost = x;
            return obs;
        }
        double ug1 = std::sqrt(ug0 * ug0 + 2.0 * a * dt);
        double g_next = wbar + ug1;
        double lg_next = lg + std::log(ug0 / ug1);
        double f_next = g_next - wn;

        double uv0 = vimg - wbar;
        double v_next, gap_next;
        if (uv0 > 0.0) {
            double uv1 = std::sqrt(uv0 * uv0 + 2.0 * a * dt);
            v_next = v * ((ug0 + uv0) / (ug1 + uv1));
            vimg = wbar + uv1;
            gap_next = vimg - wn;
            if (gap_next <= 0.0) { // driver reached the image at the step end
                vimg = wn;
                gap_next = 0.0;
                v_next = f_next;
            }
        } else {
            // absorbed within the step: the slit flow pushes a point sitting
            // at the driver off by sqrt(2 a dt)
            double uv1 = std::sqrt(2.0 * a * dt);
            vimg = wbar + uv1;
            v_next = ug1 - uv1;
            gap_next = vimg - wn;
            if (gap_next <= 0.0) {
                vimg = wn;
                gap_next = 0.0;
                v_next = f_next;
            }
        }

        // rightmost image, offset start, same reflection rule
        double o_u0 = o - wbar;
        double o_next;
        if (o_u0 <= 0.0)
            o_next = wbar + std::sqrt(2.0 * a * dt);
        else
            o_next = wbar + std::sqrt(o_u0 * o_u0 + 2.0 * a * dt);
        o_next = std::max(o_next, wn);

        if (f_next <= swallow_eps || v_next <= 0.0) {
            double f_prev = obs.f.back();
            double theta = f_prev > f_next ? std::clamp((f_prev - swallow_eps) / (f_prev - f_next), 0.0, 1.0)
                                           : 1.0;
            obs.swallow_time = obs.t(k) + theta * dt;
            obs.rightmost = x;
            return obs;
        }
        g = g_next;
        lg = lg_next;
        v = v_next;
        o = o_next;
        push(k + 1, g, lg, v, o, gap_next);
    }
    if (x_r == 0.0 || (driver.gap(0) > 0.0 && driver.gap(driver.size() - 1) <= 0.0))
        obs.rightmost = x_r;
    return obs;
}

TracePolyline trace_points(const DriverPath& driver, double eps) {
    require(eps > 1e-6 && eps < 1e-1, Guard::bad_argument, "trace_points: eps in (1e-6, 1e-1)");
    double a = driver.a;
    double dt = driver.dt;
    std::size_t n = driver.size();

    TracePolyline trace;
    trace.eps = eps;
    trace.dt = dt;
    trace.pts.resize(n);
    trace.pts[0] = {0.0, 0.0};

    std::vector<double> wbar(n > 0 ? n - 1 : 0);
    for (std::size_t j = 0; j + 1 < n; ++j) wbar[j] = 0.5 * (driver.w[j] + driver.w[j + 1]);

    for (std::size_t k = 1; k < n; ++k) {
        std::complex<double> z(driver.w[k], eps);
        for (std::size_t j = k; j-- > 0;) {
            std::complex<double> u0 = z - wbar[j];
            std::complex<double> u = std::sqrt(u0 * u0 - 2.0 * a * dt);
            if (u.imag() < 0.0) u = -u;
            z = wbar[j] + u;
            require(z.imag() > -eps, Guard::branch_failure,
                    "trace_points: pullback left the closed upper half-plane");
        }
        trace.pts[k] = z;
    }
    return trace;
}

double harmonic_measure_infinity(const LoewnerObservables& obs, double t) {
    require(!obs.swallow_time || t < *obs.swallow_time, Guard::swallowed_point,
            "harmonic_measure_infinity: t past the swallowing time");
    std::size_t k = static_cast<std::size_t>(std::llround(t / obs.dt));
    require(k < obs.size(), Guard::bad_argument, "harmonic_measure_infinity: t beyond the path");
    return (obs.g[k] - obs.o[k]) / 3.14159265358979323846264338327950;
}

double hitting_time_radial(const LoewnerObservables& obs, double s) {
    require(s >= 0.0, Guard::bad_argument, "hitting_time_radial: s >= 0");
    double target = std::log(obs.x - obs.x_r) - obs.a * s;
    if (std::log(obs.delta[0]) <= target) return 0.0;
    for (std::size_t k = 1; k < obs.size(); ++k) {
        double cur = std::log(obs.delta[k]);
        if (cur <= target) {
            double prev = std::log(obs.delta[k - 1]);
            double theta = (prev - target) / (prev - cur);
            return obs.t(k - 1) + theta * obs.dt;
        }
    }
    // delta collapses to the threshold at the swallowing time
    if (obs.swallow_time) return *obs.swallow_time;
    fail(Guard::not_reached, "hitting_time_radial: threshold not reached");
}

double trace_distance(const TracePolyline& trace, double x, std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t stop = std::min(k + 1, trace.pts.size());
    for (std::size_t j = 0; j < stop; ++j)
        best = std::min(best, std::abs(trace.pts[j] - std::complex<double>(x, 0.0)));
    return best;
}

double first_time_within(const TracePolyline& trace, double x, double threshold) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < trace.pts.size(); ++k) {
        best = std::min(best, std::abs(trace.pts[k] - std::complex<double>(x, 0.0)));
        if (best <= threshold) return trace.dt * static_cast<double>(k);
    }
    fail(Guard::not_reached, "first_time_within: threshold not reached");
}

double hitting_time_trace(const LoewnerObservables& obs, const TracePolyline& trace, double s) {
    return first_time_within(trace, obs.x, std::exp(-s));
}

} // namespace slelab
