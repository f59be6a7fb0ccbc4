#ifndef SLELAB_LOEWNER_HPP
#define SLELAB_LOEWNER_HPP

#include "slelab/drivers.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace slelab {

// Exact one-step slit map for a constant driver w over capacity dtau:
// u0 = g - w, u = sqrt(u0^2 + 2 a dtau), g -> w + u, g' -> g' * u0 / u.
void slit_step(double& g, double& gp, double w, double a, double dtau);

// same map on interior points, branch with nonnegative imaginary part
std::complex<double> slit_step_complex(std::complex<double> g, double w, double a, double dtau);

// Per-tracked-point boundary observables along a one-force-point driver.
// o is the image of the rightmost swallowed real (reflected evolution from
// an offset of 1e-9 x right of the origin); g = f + w.
struct LoewnerObservables {
    double x = 0.0;
    double x_r = 0.0;
    double a = 0.0;
    double rho = 0.0;
    double dt = 0.0;
    std::vector<double> f;
    std::vector<double> log_gprime;
    std::vector<double> v;
    std::vector<double> delta;
    std::vector<double> q;
    std::vector<double> g;
    std::vector<double> o;
    std::vector<double> d_gap; // force-point image gap V - W (>= 0)
    std::optional<double> swallow_time;
    double rightmost = 0.0; // sup of swallowed reals among tracked candidates

    std::size_t size() const { return f.size(); }
    double t(std::size_t k) const { return dt * static_cast<double>(k); }
};

LoewnerObservables evolve_observables(const DriverPath& driver, double x);

struct TracePolyline {
    std::vector<std::complex<double>> pts;
    double eps = 0.0;
    double dt = 0.0;
};

// tip at each grid time by pulling w_k + i eps back through the inverse
// slit maps in reverse order
TracePolyline trace_points(const DriverPath& driver, double eps);

// omega_inf((r_t, x], H_t) = (g_t(x) - O_t) / pi
double harmonic_measure_infinity(const LoewnerObservables& obs, double t);

// first t with delta_t <= (x - x_r) e^{-a s}; log-linear interpolation in s
double hitting_time_radial(const LoewnerObservables& obs, double s);

// first t with dist(x, trace[0,t]) <= e^{-s}
double hitting_time_trace(const LoewnerObservables& obs, const TracePolyline& trace, double s);

// first grid time with dist(x, trace[0,t]) <= threshold
double first_time_within(const TracePolyline& trace, double x, double threshold);

// distance from x to the polyline vertices up to index k (inclusive)
double trace_distance(const TracePolyline& trace, double x, std::size_t k);

} // namespace slelab

#endif
