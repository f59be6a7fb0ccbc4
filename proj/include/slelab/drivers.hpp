#ifndef SLELAB_DRIVERS_HPP
#define SLELAB_DRIVERS_HPP

#include "slelab/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace slelab {

// Discretized driving process on a uniform capacity-time grid.
// One-point drivers keep the single force-point image in v[0];
// multi-point drivers carry one column per force point.
struct DriverPath {
    double dt = 0.0;
    double a = 0.0;
    double rho = 0.0;
    std::vector<double> w;
    std::vector<std::vector<double>> v; // v[j][k], j-th force point at step k
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::optional<std::size_t> continuation_hit;
    bool non_hitting_regime = false; // rho >= kappa/2 - 2, reported not fatal

    std::size_t size() const { return w.size(); }
    double t(std::size_t k) const { return dt * static_cast<double>(k); }
    double gap(std::size_t k) const { return v[0][k] - w[k]; }
};

struct MultiForceConfig {
    std::vector<double> x_left;    // decreasing, <= 0
    std::vector<double> x_right;   // increasing, >= 0
    std::vector<double> rho_left;
    std::vector<double> rho_right;
};

// One-force-point driver. The gap D = V - W is a Bessel-type process of
// dimension 1 + a(2+rho), discretized by the absorbed implicit Euler step;
// V is integrated with the companion implicit drift and W = V - D.
// x_r = 0+ starts the gap at 0 exactly; the first step is bootstrapped with
// the exact squared-Bessel transition mean.
DriverPath simulate_driver(const SleParams& p, double dt, double t_max, std::uint64_t seed,
                           std::uint64_t stream = 0);

// Multi-force-point driver, explicit Euler with local step halving near
// collisions. Swallowed force points on a side merge into a single
// reflected boundary gap carrying their cumulative weight; evolution stops
// when a side's swallowed weights sum to <= -2.
DriverPath simulate_driver_multi(double kappa, const MultiForceConfig& cfg, double dt,
                                 double t_max, std::uint64_t seed, std::uint64_t stream = 0);

} // namespace slelab

#endif
