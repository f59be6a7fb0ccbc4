#include <doctest.h>

#include "slelab/loewner.hpp"
#include "slelab/parallel.hpp"
#include "slelab/radial.hpp"

#include <cmath>
#include <complex>

using namespace slelab;

TEST_CASE("slit step: identity, closed form, capacity additivity") {
    double g = 1.0, gp = 1.0;
    slit_step(g, gp, 0.0, 1.0, 0.0);
    CHECK(g == 1.0);
    CHECK(gp == 1.0);

    slit_step(g, gp, 0.0, 1.0, 0.5);
    CHECK(g == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(gp == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    // two half steps equal one full step exactly (constant driver)
    double g1 = 3.0, gp1 = 0.7, g2 = 3.0, gp2 = 0.7;
    slit_step(g1, gp1, 1.0, 0.66, 0.8);
    slit_step(g2, gp2, 1.0, 0.66, 0.4);
    slit_step(g2, gp2, 1.0, 0.66, 0.4);
    CHECK(g1 == doctest::Approx(g2).epsilon(1e-15));
    CHECK(gp1 == doctest::Approx(gp2).epsilon(1e-15));

    CHECK_THROWS_AS(slit_step(g1, gp1, g1 + 1.0, 1.0, 0.1), SleError);
}

TEST_CASE("observables: initial row and monotone derivative") {
    SleParams p = SleParams::make(2.0, -1.5, 1.0, 0.25);
    DriverPath d = simulate_driver(p, 1e-3, 1.0, 17);
    LoewnerObservables obs = evolve_observables(d, 1.0);
    CHECK(obs.f[0] == 1.0);
    CHECK(obs.log_gprime[0] == 0.0);
    CHECK(obs.v[0] == doctest::Approx(0.75));
    CHECK(obs.delta[0] == doctest::Approx(0.75));
    CHECK(obs.q[0] == doctest::Approx(0.75));

    for (std::size_t k = 1; k < obs.size(); ++k) {
        CHECK(obs.log_gprime[k] <= obs.log_gprime[k - 1]);
        CHECK(obs.q[k] >= 0.0);
        CHECK(obs.q[k] <= 1.0);
        CHECK(obs.f[k] > 0.0);
    }
}

TEST_CASE("log g' matches the trapezoid of -a/f^2 and improves first order") {
    SleParams p = SleParams::make(2.0, 0.0, 1.0, 0.0);
    auto gap_for = [&](double dt) {
        DriverPath d = simulate_driver(p, dt, 0.5, 23);
        LoewnerObservables obs = evolve_observables(d, 1.0);
        double acc = 0.0;
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < obs.size(); ++k) {
            double i0 = p.a() / (obs.f[k] * obs.f[k]);
            double i1 = p.a() / (obs.f[k + 1] * obs.f[k + 1]);
            acc -= 0.5 * (i0 + i1) * dt;
            worst = std::max(worst, std::fabs(acc - obs.log_gprime[k + 1]));
        }
        return worst;
    };
    double coarse = gap_for(1e-3);
    double fine = gap_for(5e-4);
    CHECK(fine < 0.75 * coarse); // different paths, but the budget shrinks with dt
    CHECK(coarse < 5e-2);
}

TEST_CASE("trace of the zero driver is the vertical slit") {
    DriverPath d;
    d.dt = 1e-3;
    d.a = 1.0;
    d.rho = 0.0;
    d.w.assign(501, 0.0);
    d.v.assign(1, std::vector<double>(501, 0.0));
    TracePolyline tr = trace_points(d, 1e-3);
    CHECK(tr.pts[0] == std::complex<double>(0.0, 0.0));
    for (std::size_t k = 1; k < tr.pts.size(); ++k) {
        double t = d.t(k);
        CHECK(std::fabs(tr.pts[k].real()) < 2.0 * tr.eps);
        CHECK(tr.pts[k].imag() == doctest::Approx(std::sqrt(2.0 * t)).epsilon(5e-3));
    }
}

TEST_CASE("harmonic measure from infinity") {
    SleParams p = SleParams::make(2.0, -1.5, 1.0, 0.0);
    DriverPath d = simulate_driver(p, 1e-3, 0.5, 29);
    LoewnerObservables obs = evolve_observables(d, 1.0);
    // t = 0: omega = x / pi, up to the 1e-9 x tracking offset
    CHECK(harmonic_measure_infinity(obs, 0.0) ==
          doctest::Approx(1.0 / 3.14159265358979324).epsilon(1e-8));

    // Q equals the mapping-out length ratio, with O tracked
    // independently of the driver's V column
    std::size_t checked = 0;
    for (std::size_t k = 1; k < obs.size(); k += 50) {
        double ratio = (obs.g[k] - obs.o[k]) / obs.f[k];
        if (obs.q[k] > 0.02 && obs.q[k] < 0.98) {
            CHECK(ratio == doctest::Approx(obs.q[k]).epsilon(2e-2));
            ++checked;
        }
    }
    CHECK(checked > 3);
}

TEST_CASE("hydrodynamic normalization proxy at z = 100i") {
    SleParams p = SleParams::make(3.0, -1.0, 1.0, 0.0);
    DriverPath d = simulate_driver(p, 1e-3, 2.0, 31);
    std::complex<double> z(0.0, 100.0);
    std::complex<double> g = z;
    for (std::size_t k = 0; k + 1 < d.size(); ++k)
        g = slit_step_complex(g, 0.5 * (d.w[k] + d.w[k + 1]), d.a, d.dt);
    double hcap = d.a * 2.0;
    CHECK(std::abs(g - z) < 2.0 * hcap / std::abs(z));
}

TEST_CASE("radial hitting time: zero threshold, monotone in s") {
    SleParams p = SleParams::make(3.0, -1.0, 1.0, 0.0);
    DriverPath d = simulate_driver(p, 1e-4, 1.5, 37);
    LoewnerObservables obs = evolve_observables(d, 1.0);
    CHECK(hitting_time_radial(obs, 0.0) == 0.0);
    double prev = 0.0;
    for (double s = 0.2; s < 1.4; s += 0.2) {
        double t;
        try {
            t = hitting_time_radial(obs, s);
        } catch (const SleError&) {
            break; // path ended before the threshold
        }
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("capacity/radial hitting-time sandwich") {
    SleParams p = SleParams::make(3.0, -1.0, 1.0, 0.0);
    const long n_paths = 25;
    const double dt = 1e-4, t_max = 0.8;
    long violations = 0, checked = 0;
    std::vector<long> vio(n_paths, 0), tot(n_paths, 0);
    parallel_paths(n_paths, 2, [&](std::size_t i) {
        DriverPath d = simulate_driver(p, dt, t_max, 4100, i);
        LoewnerObservables obs = evolve_observables(d, 1.0);
        TracePolyline tr = trace_points(d, 1e-3);
        double gap = 0.0; // polyline resolution: largest vertex spacing
        for (std::size_t k = 1; k < tr.pts.size(); ++k)
            gap = std::max(gap, std::abs(tr.pts[k] - tr.pts[k - 1]));
        double cs = c_star(p.a(), 1.0, 0.0);
        for (double s : {1.0, 1.5, 2.0}) {
            // bracket tau_s by the vertex-gap measurement uncertainty
            double tau_late, tau_early;
            try {
                tau_late = first_time_within(tr, 1.0, std::exp(-s));
            } catch (const SleError&) {
                continue;
            }
            try {
                tau_early = first_time_within(tr, 1.0, std::exp(-s) + gap);
            } catch (const SleError&) {
                continue;
            }
            double lo_arg = std::max(s / p.a() - cs, 0.0);
            double lo, hi;
            try {
                hi = hitting_time_radial(obs, s / p.a() + cs);
            } catch (const SleError&) {
                hi = std::numeric_limits<double>::infinity();
            }
            try {
                lo = hitting_time_radial(obs, lo_arg);
            } catch (const SleError&) {
                continue;
            }
            ++tot[i];
            if (!(lo <= tau_late + dt && tau_early <= hi + dt)) ++vio[i];
        }
    });
    for (long i = 0; i < n_paths; ++i) {
        violations += vio[i];
        checked += tot[i];
    }
    CHECK(checked > 25);
    CHECK(violations == 0);
}
