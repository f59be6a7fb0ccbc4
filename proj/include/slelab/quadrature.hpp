#ifndef SLELAB_QUADRATURE_HPP
#define SLELAB_QUADRATURE_HPP

#include <vector>

namespace slelab {

// Gauss-Jacobi rule on (-1, 1) for the weight (1-x)^alpha (1+x)^beta,
// alpha, beta > -1. Exact for polynomial integrands of degree <= 2n-1.
struct JacobiRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

JacobiRule gauss_jacobi(int n, double alpha, double beta);

// integral over (0,1) of f(x) x^a (1-x)^b, endpoint exponents a, b > -1,
// f smooth; maps onto a matched Gauss-Jacobi rule
template <class F>
double integrate01_weighted(int n, double a, double b, F&& f);

// weighted least squares fit y ~ slope*x + intercept; w are nonnegative
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& w);

} // namespace slelab

#include <cmath>

namespace slelab {

template <class F>
double integrate01_weighted(int n, double a, double b, F&& f) {
    // x = (1+u)/2: x^a -> ((1+u)/2)^a, (1-x)^b -> ((1-u)/2)^b, dx = du/2
    JacobiRule rule = gauss_jacobi(n, b, a);
    double scale = std::pow(0.5, a + b + 1.0);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        double x = 0.5 * (1.0 + rule.nodes[k]);
        s += rule.weights[k] * f(x);
    }
    return scale * s;
}

} // namespace slelab

#endif
