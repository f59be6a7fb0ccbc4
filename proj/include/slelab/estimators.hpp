#ifndef SLELAB_ESTIMATORS_HPP
#define SLELAB_ESTIMATORS_HPP

#include "slelab/loewner.hpp"
#include "slelab/qdiff.hpp"
#include "slelab/radial.hpp"
#include "slelab/spectrum.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slelab {

enum class MomentMethod { direct, tilted, exact };

const char* to_string(MomentMethod m);

struct MomentEstimate {
    double s = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
    long n_paths = 0;
    MomentMethod method = MomentMethod::exact;
};

struct MomentOptions {
    double dt = 1e-4;   // direct method capacity step
    double ds = 1e-3;   // tilted method radial step
    double t_max = 12.0; // direct method horizon
    int n_terms = 64;   // exact method expansion order
    int workers = 1;
    long min_survivors = 100;
};

// E[g'_s^zeta 1{radial time s is reached}] at a grid of radial times.
// The three methods estimate the same quantity; exact carries stderr 0.
std::vector<MomentEstimate> one_point_moment(const SleParams& p, const SpectrumParams& sp,
                                             const std::vector<double>& s_values, long n_paths,
                                             MomentMethod method, const MomentOptions& opt,
                                             std::uint64_t seed);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// weighted least squares on log(value) vs s; weights (value/stderr)^2, or
// uniform when every stderr is zero
ExponentFit exponent_fit(const std::vector<MomentEstimate>& series);

struct BoxCountReport {
    int n = 0;
    double count_upper = 0.0; // ensemble mean of the per-path integer counts
    double count_lower = 0.0;
    long grid_size = 0;
    double beta = 0.0;
    bool resolution_ok = true; // e^-n >= 10 sqrt(dt)
};

struct BoxCountOptions {
    double dt = 5e-5;
    double t_max = 4.0;
    double c_prime = 1.0 / 16.0; // distortion constant of the covering threshold
    double c2_lower = 16.0;      // lower-count threshold constant
    int workers = 1;
};

// covering counts on [1,2] for every n in [n_lo, n_hi], one driver ensemble
std::vector<BoxCountReport> box_count_range(const SleParams& p, const SpectrumParams& sp, int n_lo,
                                            int n_hi, long n_paths, const BoxCountOptions& opt,
                                            std::uint64_t seed);

BoxCountReport box_count(const SleParams& p, const SpectrumParams& sp, int n, long n_paths,
                         const BoxCountOptions& opt, std::uint64_t seed);

struct AuditSample {
    double t = 0.0;
    double x = 0.0;
    double delta = 0.0;
    double dist = 0.0;      // distance to the trace polyline
    double dist_slack = 0.0; // local vertex-gap allowance near the argmin
    double harm_len = 0.0;  // g_t(x) - O_t
    double gprime = 0.0;
    bool dist_ok = true;   // delta within [ (x-x_r)/(4x) dist, 4 dist ]
    bool koebe_ok = true;   // g(x)-O within [ g' dist / 4, 4 g' dist ]
};

struct AuditReport {
    std::vector<AuditSample> samples;
    long n_samples = 0;
    long dist_violations = 0;
    long koebe_violations = 0;

    double dist_violation_rate() const {
        return n_samples ? static_cast<double>(dist_violations) / n_samples : 0.0;
    }
    double koebe_violation_rate() const {
        return n_samples ? static_cast<double>(koebe_violations) / n_samples : 0.0;
    }
};

struct AuditOptions {
    double dt = 1e-4;
    double eps = 1e-3;
    double t_max = 1.0;
    int t_samples = 50;
    std::vector<double> x_values = {0.5, 1.0, 1.5};
    int workers = 1;
    bool keep_samples = true;
};

// per-sample check of the distance sandwich and the mapped-length Koebe
// sandwich; both are allowed the polyline vertex-gap measurement slack
AuditReport distortion_audit(const SleParams& p, long n_paths, const AuditOptions& opt,
                             std::uint64_t seed);

} // namespace slelab

#endif
