#include "slelab/qdiff.hpp"
#include "slelab/quadrature.hpp"
#include "slelab/rng.hpp"
#include "slelab/special.hpp"

#include <cmath>

namespace slelab {

QDiffusionSpec QDiffusionSpec::make(const SleParams& p, const SpectrumParams& sp, int n_terms) {
    QDiffusionSpec s;
    s.a = p.a();
    s.mu = sp.mu;
    s.rho = p.rho;
    s.delta_plus = 4.0 - 8.0 * s.a - 2.0 * s.a * s.rho + 4.0 * s.mu;
    s.delta_minus = 4.0 * s.a + 2.0 * s.a * s.rho;
    require(s.delta_plus > 0.0 && s.delta_minus > 0.0, Guard::parameter_out_of_range,
            "QDiffusionSpec: delta_+ and delta_- must be positive");
    s.jacobi_alpha = s.delta_plus / 2.0 - 1.0;
    s.jacobi_beta = s.delta_minus / 2.0 - 1.0;
    s.c_tilde = std::exp(lanczos_lgamma(2.0 - 2.0 * s.a + 2.0 * s.mu) -
                         lanczos_lgamma(2.0 * s.a + s.a * s.rho) -
                         lanczos_lgamma(2.0 - 4.0 * s.a - s.a * s.rho + 2.0 * s.mu));

    double al = s.jacobi_alpha, be = s.jacobi_beta;
    s.inv_norm2.resize(n_terms);
    for (int n = 0; n < n_terms; ++n) {
        // ||P_n||^2 = 2^(al+be+1) / (2n+al+be+1) * G(n+al+1)G(n+be+1) / (G(n+al+be+1) n!)
        double ln = (al + be + 1.0) * std::log(2.0) - std::log(2.0 * n + al + be + 1.0) +
                    lanczos_lgamma(n + al + 1.0) + lanczos_lgamma(n + be + 1.0) -
                    lanczos_lgamma(n + al + be + 1.0) - lanczos_lgamma(n + 1.0);
        s.inv_norm2[n] = std::exp(-ln);
    }
    return s;
}

double invariant_density(const QDiffusionSpec& spec, double x) {
    require(x > 0.0 && x < 1.0, Guard::bad_argument, "invariant_density: x in (0,1)");
    double a = spec.a, rho = spec.rho, mu = spec.mu;
    return spec.c_tilde * std::pow(x, 1.0 - 4.0 * a - a * rho + 2.0 * mu) *
           std::pow(1.0 - x, 2.0 * a + a * rho - 1.0);
}

double stationary_moment_inv_mu(const QDiffusionSpec& spec) {
    double a = spec.a, rho = spec.rho, mu = spec.mu;
    double g2 = 2.0 - 4.0 * a - a * rho + mu;
    require(g2 > 0.0, Guard::gamma_pole, "stationary_moment_inv_mu: 2-4a-a rho+mu <= 0");
    return std::exp(lanczos_lgamma(2.0 - 2.0 * a + 2.0 * mu) + lanczos_lgamma(g2) -
                    lanczos_lgamma(2.0 - 2.0 * a + mu) -
                    lanczos_lgamma(2.0 - 4.0 * a - a * rho + 2.0 * mu));
}

double eigenvalue(const QDiffusionSpec& spec, int n) {
    require(n >= 0, Guard::bad_argument, "eigenvalue: n >= 0");
    double half = spec.delta_plus / 2.0 + spec.delta_minus / 2.0;
    return -0.5 * n * (n + half - 1.0);
}

double jacobi_poly(int n, double alpha, double beta, double x) {
    if (n == 0) return 1.0;
    double pm1 = 1.0;
    double pc = 0.5 * ((alpha + beta + 2.0) * x + alpha - beta);
    for (int k = 2; k <= n; ++k) {
        double kk = k, ab = alpha + beta;
        double c1 = 2.0 * kk * (kk + ab) * (2.0 * kk + ab - 2.0);
        double c2 = (2.0 * kk + ab - 1.0) * (2.0 * kk + ab) * (2.0 * kk + ab - 2.0);
        double c3 = (2.0 * kk + ab - 1.0) * (alpha * alpha - beta * beta);
        double c4 = 2.0 * (kk + alpha - 1.0) * (kk + beta - 1.0) * (2.0 * kk + ab);
        double pn = ((c2 * x + c3) * pc - c4 * pm1) / c1;
        pm1 = pc;
        pc = pn;
    }
    return pc;
}

namespace {

double inv_norm2_at(const QDiffusionSpec& spec, int n) {
    if (n < spec.n_terms()) return spec.inv_norm2[n];
    double al = spec.jacobi_alpha, be = spec.jacobi_beta;
    double ln = (al + be + 1.0) * std::log(2.0) - std::log(2.0 * n + al + be + 1.0) +
                lanczos_lgamma(n + al + 1.0) + lanczos_lgamma(n + be + 1.0) -
                lanczos_lgamma(n + al + be + 1.0) - lanczos_lgamma(n + 1.0);
    return std::exp(-ln);
}

// sup bound of |P_n| on [-1,1] for alpha,beta: attained at an endpoint when
// max(alpha,beta) >= -1/2; |P_n(1)| = C(n+alpha,n), |P_n(-1)| = C(n+beta,n)
double jacobi_sup(int n, double alpha, double beta) {
    double la = lanczos_lgamma(n + alpha + 1.0) - lanczos_lgamma(alpha + 1.0) - lanczos_lgamma(n + 1.0);
    double lb = lanczos_lgamma(n + beta + 1.0) - lanczos_lgamma(beta + 1.0) - lanczos_lgamma(n + 1.0);
    return std::exp(std::max(la, lb));
}

} // namespace

double transition_density(const QDiffusionSpec& spec, double t, double x0, double y,
                          int n_terms, bool* truncation_warn) {
    require(t > 0.0, Guard::bad_argument, "transition_density: t > 0");
    require(x0 > 0.0 && x0 <= 1.0 && y > 0.0 && y < 1.0, Guard::bad_argument,
            "transition_density: x0, y in (0,1)");
    require(n_terms >= 1, Guard::bad_argument, "transition_density: n_terms >= 1");

    double al = spec.jacobi_alpha, be = spec.jacobi_beta;
    double u0 = 1.0 - 2.0 * x0;
    double u = 1.0 - 2.0 * y;
    double w = std::pow(1.0 - u, al) * std::pow(1.0 + u, be);
    double sum = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        sum += std::exp(eigenvalue(spec, n) * t) * jacobi_poly(n, al, be, u0) *
               jacobi_poly(n, al, be, u) * inv_norm2_at(spec, n);
    }
    if (truncation_warn) {
        int n = n_terms - 1;
        double sup = jacobi_sup(n, al, be);
        double bound = std::exp(eigenvalue(spec, n) * t) * sup * sup * inv_norm2_at(spec, n);
        *truncation_warn = (bound > 1e-8 * std::fabs(sum));
    }
    // factor 2 from Y = 1 - 2Q, times the Y-weight at the target point
    return 2.0 * w * sum;
}

double interval_mass(const QDiffusionSpec& spec, double t, double x0, double lo, double hi,
                     int n_terms) {
    require(0.0 <= lo && lo < hi && hi <= 1.0, Guard::bad_argument, "interval_mass: 0<=lo<hi<=1");
    double al = spec.jacobi_alpha, be = spec.jacobi_beta;
    double u0 = 1.0 - 2.0 * x0;
    // Q in (lo,hi) <-> u in (1-2hi, 1-2lo)
    double ua = 1.0 - 2.0 * hi, ub = 1.0 - 2.0 * lo;

    // n = 0 term: invariant mass of (ua, ub) under the Y-weight
    double mass = 0.0;
    {
        // int (1-u)^al (1+u)^be du over (ua,ub), via incomplete beta with z=(1+u)/2
        double za = 0.5 * (1.0 + ua), zb = 0.5 * (1.0 + ub);
        double full = std::exp((al + be + 1.0) * std::log(2.0) + log_beta(be + 1.0, al + 1.0));
        double frac = reg_inc_beta(be + 1.0, al + 1.0, zb) - reg_inc_beta(be + 1.0, al + 1.0, za);
        mass += full * frac * spec.inv_norm2[0];
    }
    // n >= 1: d/du[(1-u)^(al+1)(1+u)^(be+1) P_{n-1}^{(al+1,be+1)}(u)] = -2n w(u) P_n(u)
    auto anti = [&](int n, double u) {
        return std::pow(1.0 - u, al + 1.0) * std::pow(1.0 + u, be + 1.0) *
               jacobi_poly(n - 1, al + 1.0, be + 1.0, u);
    };
    for (int n = 1; n < n_terms; ++n) {
        double integral = -(anti(n, ub) - anti(n, ua)) / (2.0 * n);
        mass += std::exp(eigenvalue(spec, n) * t) * jacobi_poly(n, al, be, u0) * integral *
                inv_norm2_at(spec, n);
    }
    return mass;
}

double moment_inv_mu(const QDiffusionSpec& spec, double t, double x0, int n_terms) {
    double al = spec.jacobi_alpha, be = spec.jacobi_beta, mu = spec.mu;
    require(al - mu > -1.0, Guard::parameter_out_of_range,
            "moment_inv_mu: y^(-mu) not integrable against the kernel");
    double u0 = 1.0 - 2.0 * x0;
    // int_0^1 y^-mu p(t,x0,y) dy = sum_n e^(lam t) P_n(u0)/||P_n||^2 *
    //   2^mu int (1-u)^(al-mu) (1+u)^be P_n(u) du
    int nq = n_terms + 24;
    JacobiRule rule = gauss_jacobi(nq, al - mu, be);
    double total = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        double m = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            m += rule.weights[k] * jacobi_poly(n, al, be, rule.nodes[k]);
        total += std::exp(eigenvalue(spec, n) * t) * jacobi_poly(n, al, be, u0) *
                 inv_norm2_at(spec, n) * std::pow(2.0, mu) * m;
    }
    return total;
}

double stationary_cdf(const QDiffusionSpec& spec, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return reg_inc_beta(spec.delta_plus / 2.0, spec.delta_minus / 2.0, x);
}

std::vector<double> sample_stationary(const QDiffusionSpec& spec, int n, std::uint64_t seed) {
    require(n >= 1, Guard::bad_argument, "sample_stationary: n >= 1");
    std::vector<double> out(n);
    double a = spec.delta_plus / 2.0, b = spec.delta_minus / 2.0;
    for (int i = 0; i < n; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        out[i] = rng.beta(a, b);
    }
    return out;
}

} // namespace slelab
