#ifndef SLELAB_SPECIAL_HPP
#define SLELAB_SPECIAL_HPP

namespace slelab {

// Gamma function, Lanczos approximation (g = 607/128, 15 terms),
// relative error below 1e-13 on the positive axis.
double lanczos_lgamma(double x);
double lanczos_tgamma(double x);

double log_beta(double a, double b);

// regularized incomplete beta I_x(a,b), continued fraction
double reg_inc_beta(double a, double b, double x);

// regularized upper incomplete gamma Q(a,x); chi-square tail p-value
double reg_inc_gamma_upper(double a, double x);
double chi2_sf(double chi2, int dof);

} // namespace slelab

#endif
