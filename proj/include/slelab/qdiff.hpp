#ifndef SLELAB_QDIFF_HPP
#define SLELAB_QDIFF_HPP

#include "slelab/spectrum.hpp"

#include <cstdint>
#include <vector>

namespace slelab {

// Jacobi-type diffusion on (0,1]: the radial-time ratio process under the
// weighted measure. Spectral data lives on Y = 1 - 2Q in [-1,1], where the
// generator is the classical Jacobi operator with weight
// (1-y)^(dp/2-1) (1+y)^(dm/2-1).
struct QDiffusionSpec {
    double a;
    double mu;
    double rho;
    double delta_plus;   // 4 - 8a - 2a rho + 4 mu
    double delta_minus;  // 4a + 2a rho
    double jacobi_alpha; // delta_plus/2 - 1
    double jacobi_beta;  // delta_minus/2 - 1
    double c_tilde;      // invariant-density normalization

    // precomputed per-degree spectral data
    std::vector<double> inv_norm2; // 1 / ||P_n||^2

    static QDiffusionSpec make(const SleParams& p, const SpectrumParams& sp, int n_terms = 64);

    int n_terms() const { return static_cast<int>(inv_norm2.size()); }
};

// invariant density c~ x^(1-4a-a rho+2mu) (1-x)^(2a+a rho-1) on (0,1)
double invariant_density(const QDiffusionSpec& spec, double x);

// E*[X^(-mu)] for the stationary law; equals one_point_prefactor
double stationary_moment_inv_mu(const QDiffusionSpec& spec);

// lambda_n = -(n/2)(n + delta_plus/2 + delta_minus/2 - 1)
double eigenvalue(const QDiffusionSpec& spec, int n);

// Jacobi polynomial value by three-term recurrence
double jacobi_poly(int n, double alpha, double beta, double x);

// transition density p(t, x0, y) in Q-coordinates; truncation_warn is set
// when the tail bound of the last term exceeds 1e-8 of the running sum
double transition_density(const QDiffusionSpec& spec, double t, double x0, double y,
                          int n_terms, bool* truncation_warn = nullptr);

// mass of the transition law on the interval (lo, hi) in Q-coordinates,
// via the closed-form antiderivative of w P_n
double interval_mass(const QDiffusionSpec& spec, double t, double x0, double lo, double hi,
                     int n_terms);

// E*[Q_t^(-mu) | Q_0 = x0] by the spectral expansion with matched quadrature
double moment_inv_mu(const QDiffusionSpec& spec, double t, double x0, int n_terms);

// stationary CDF (regularized incomplete beta in Q-coordinates)
double stationary_cdf(const QDiffusionSpec& spec, double x);

// i.i.d. stationary draws, Beta(delta_plus/2, delta_minus/2), two-Gamma ratio
std::vector<double> sample_stationary(const QDiffusionSpec& spec, int n, std::uint64_t seed);

} // namespace slelab

#endif
