#ifndef SLELAB_SPECTRUM_HPP
#define SLELAB_SPECTRUM_HPP

#include "slelab/common.hpp"

namespace slelab {

// Physical parameters of the one-force-point process. a = 2/kappa, the
// capacity normalization used throughout (hcap = a*t).
struct SleParams {
    double kappa;
    double rho;
    double x;   // tracked boundary point, x > x_r
    double x_r; // force point, 0 <= x_r < x

    double a() const { return 2.0 / kappa; }

    static SleParams make(double kappa, double rho, double x = 1.0, double x_r = 0.0);
};

// Exponent algebra attached to the weighting parameter zeta.
struct SpectrumParams {
    double mu_c;
    double zeta;
    double mu;
    double beta;
    bool mu_c_nonpositive = false; // beta undefined at zeta = 0 when mu_c <= 0
};

enum class PhaseClass {
    NoHit,
    HitCannotContinue,
    HitIntervalContinue,
    HitBounceEmptyInterior,
    Unclassified, // below every listed regime
};

// zeta > -mu_c^2 / (2a)
SpectrumParams spectrum_params(const SleParams& p, double zeta);
SpectrumParams spectrum_params_from_beta(const SleParams& p, double beta);
SpectrumParams spectrum_params_from_mu(const SleParams& p, double mu);

struct DimSpectrum {
    double d;          // d(beta)
    double d_star;     // d*(beta / (1 + rho/2)), equals d up to rounding
    double beta_minus;
    double beta_plus;
    double beta_zero;  // (4 + 2 rho) / (8 - kappa + 2 rho)
};

double dim_d(const SleParams& p, double beta);
double dim_d_star(const SleParams& p, double beta_star);
DimSpectrum dim_spectrum(const SleParams& p, double beta);

// boundary interaction regime for cumulative weight rho_bar
PhaseClass boundary_phase(double kappa, double rho_bar);

// K = Gamma(2-2a+2mu) Gamma(2-4a-a rho+mu) / (Gamma(2-2a+mu) Gamma(2-4a-a rho+2mu))
double one_point_prefactor(const SleParams& p, const SpectrumParams& sp);

} // namespace slelab

#endif
