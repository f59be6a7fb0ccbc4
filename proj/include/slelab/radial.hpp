#ifndef SLELAB_RADIAL_HPP
#define SLELAB_RADIAL_HPP

#include "slelab/loewner.hpp"
#include "slelab/spectrum.hpp"

#include <cstdint>
#include <vector>

namespace slelab {

// Radial reparametrization: accumulated clock S_k = int_0^{t_k} Q/(1-Q) f^-2 du
// on the capacity grid, inverted by monotone linear interpolation.
struct RadialClock {
    double dt = 0.0;
    std::vector<double> s_grid; // S_k per capacity grid index
    bool stalled = false;       // a full step contributed zero clock time

    double total() const { return s_grid.empty() ? 0.0 : s_grid.back(); }
    bool reached(double s) const { return total() >= s; }
    // capacity time t(s)
    double time_at(double s) const;
    // linear resampling of a per-grid series at radial time s
    double sample(const std::vector<double>& series, double s) const;
    // log-linear resampling for positive, exponentially decaying series
    double sample_log(const std::vector<double>& series, double s) const;
};

RadialClock radial_clock(const LoewnerObservables& obs);

// Q~, L~, M~ sampled on a uniform radial grid.
struct TiltedPath {
    double ds = 0.0;
    std::vector<double> q;
    std::vector<double> l;
    std::vector<double> m_weight; // empty for the unweighted variant
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    long n_clamped = 0;     // proposals finally clamped at the floor
    long n_rejected = 0;    // step-halving retries near the floor
    long absorbed_at = -1;  // unweighted variant: index of absorption at 0

    std::size_t size() const { return q.size(); }
    double s(std::size_t k) const { return ds * static_cast<double>(k); }
};

// Euler-Maruyama for the weighted-measure diffusion
// dQ = [(1-2a-a rho/2+mu) - (1-a+mu)Q] ds + sqrt(Q(1-Q)) dB,
// clamped to (q_floor, 1] with rejection-and-halving near the floor.
TiltedPath simulate_tilted(const SleParams& p, const SpectrumParams& sp, double ds, double s_max,
                           std::uint64_t seed, std::uint64_t stream = 0);

// same SDE with mu removed from both drift coefficients; the floor absorbs
// (swallowing shows up as absorption at 0 in radial time)
TiltedPath unweighted_q_sde(const SleParams& p, double ds, double s_max, std::uint64_t seed,
                            std::uint64_t stream = 0);

struct GoodEventParams {
    double u = 5.0;
    double c_const = 1.0;
    double lambda_boost = 4.0;
};

struct GoodEventResult {
    bool indicator = false;
    double margin = 0.0; // min over the grid of band slack
};

// band |L_s - beta(1+rho/2) s| <= u sqrt(s) log(2+s) + c + lambda_boost
GoodEventResult good_event_indicator(const TiltedPath& tp, const SleParams& p,
                                     const SpectrumParams& sp, const GoodEventParams& gep,
                                     double t_max);

// M_t = g'^zeta Q^mu delta^(-mu(1+rho/2)) from the observables row nearest t
double martingale_value(const LoewnerObservables& obs, const SpectrumParams& sp, double t);
double martingale_value_at(const LoewnerObservables& obs, const SpectrumParams& sp, std::size_t k);

// C* of the capacity/radial hitting-time comparison
double c_star(double a, double x, double x_r);

} // namespace slelab

#endif
