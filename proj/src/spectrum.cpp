#include "slelab/spectrum.hpp"
#include "slelab/special.hpp"

#include <cmath>

namespace slelab {

SleParams SleParams::make(double kappa, double rho, double x, double x_r) {
    require(kappa > 0.0, Guard::bad_argument, "kappa must be positive");
    require(rho > -2.0, Guard::bad_argument, "rho must exceed -2");
    require(x_r >= 0.0 && x > x_r, Guard::bad_argument, "need x > x_r >= 0");
    return SleParams{kappa, rho, x, x_r};
}

static double mu_c_of(const SleParams& p) {
    double a = p.a();
    return 2.0 * a - 0.5 + a * p.rho / 2.0;
}

SpectrumParams spectrum_params(const SleParams& p, double zeta) {
    double a = p.a();
    double mu_c = mu_c_of(p);
    double disc = mu_c * mu_c + 2.0 * a * zeta;
    require(disc > 0.0, Guard::zeta_out_of_range, "zeta <= -mu_c^2/(2a)");
    SpectrumParams sp;
    sp.mu_c = mu_c;
    sp.zeta = zeta;
    sp.mu = mu_c + std::sqrt(disc);
    sp.beta = a / std::sqrt(disc);
    sp.mu_c_nonpositive = (mu_c <= 0.0);
    return sp;
}

SpectrumParams spectrum_params_from_beta(const SleParams& p, double beta) {
    require(beta > 0.0, Guard::bad_argument, "beta must be positive");
    double a = p.a();
    double mu_c = mu_c_of(p);
    double zeta = 0.5 / a * (a / beta + mu_c) * (a / beta - mu_c);
    return spectrum_params(p, zeta);
}

SpectrumParams spectrum_params_from_mu(const SleParams& p, double mu) {
    double a = p.a();
    double mu_c = mu_c_of(p);
    require(mu > mu_c, Guard::bad_argument, "mu must exceed mu_c");
    double zeta = mu / (2.0 * a) * (mu - 2.0 * mu_c);
    return spectrum_params(p, zeta);
}

double dim_d(const SleParams& p, double beta) {
    double k = p.kappa, rho = p.rho;
    double term = (k - 2.0 * rho) / 4.0 - (1.0 + rho / 2.0 + 2.0 * beta) / beta;
    return 1.0 - beta / k * term * term;
}

double dim_d_star(const SleParams& p, double beta_star) {
    double a = p.a(), rho = p.rho;
    double term = (1.0 - a * rho) / (2.0 * a) - (1.0 + 2.0 * beta_star) / beta_star;
    return 1.0 - a * beta_star / 2.0 * term * term * (1.0 + rho / 2.0);
}

namespace {

// d is unimodal with maximum at beta_zero and tends to -inf at 0+ and +inf;
// bracket each zero geometrically from beta_zero, then bisect.
double bisect_zero(const SleParams& p, double lo, double hi, double tol) {
    double flo = dim_d(p, lo);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = dim_d(p, mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

DimSpectrum dim_spectrum(const SleParams& p, double beta) {
    require(beta > 0.0, Guard::bad_argument, "beta must be positive");
    DimSpectrum out;
    out.d = dim_d(p, beta);
    out.d_star = dim_d_star(p, beta / (1.0 + p.rho / 2.0));
    out.beta_zero = (4.0 + 2.0 * p.rho) / (8.0 - p.kappa + 2.0 * p.rho);

    double b0 = out.beta_zero;
    require(dim_d(p, b0) > 0.0, Guard::parameter_out_of_range,
            "no positive region: d(beta_zero) <= 0");
    const double tol = 1e-12;
    double lo = b0;
    while (dim_d(p, lo) > 0.0) lo *= 0.5;
    out.beta_minus = bisect_zero(p, lo, lo * 2.0, tol);
    double hi = b0;
    while (dim_d(p, hi) > 0.0) hi *= 2.0;
    out.beta_plus = bisect_zero(p, hi * 0.5, hi, tol);
    return out;
}

PhaseClass boundary_phase(double kappa, double rho_bar) {
    require(kappa > 0.0, Guard::bad_argument, "kappa must be positive");
    double crit = kappa / 2.0 - 2.0; // no-hit threshold
    double low = kappa / 2.0 - 4.0;
    if (rho_bar >= crit) return PhaseClass::NoHit;
    if (kappa < 4.0 && rho_bar > low && rho_bar <= -2.0) return PhaseClass::HitCannotContinue;
    if (kappa > 4.0 && rho_bar > -2.0 && rho_bar <= low) return PhaseClass::HitIntervalContinue;
    double bounce_lo = std::max(-2.0, low);
    if (rho_bar > bounce_lo && rho_bar < crit) return PhaseClass::HitBounceEmptyInterior;
    return PhaseClass::Unclassified;
}

double one_point_prefactor(const SleParams& p, const SpectrumParams& sp) {
    double a = p.a(), rho = p.rho, mu = sp.mu;
    double g1 = 2.0 - 2.0 * a + 2.0 * mu;
    double g2 = 2.0 - 4.0 * a - a * rho + mu;
    double g3 = 2.0 - 2.0 * a + mu;
    double g4 = 2.0 - 4.0 * a - a * rho + 2.0 * mu;
    require(g1 > 0.0 && g2 > 0.0 && g3 > 0.0 && g4 > 0.0, Guard::gamma_pole,
            "one_point_prefactor: Gamma argument <= 0");
    return std::exp(lanczos_lgamma(g1) + lanczos_lgamma(g2) - lanczos_lgamma(g3) - lanczos_lgamma(g4));
}

} // namespace slelab
