#include "slelab/quadrature.hpp"
#include "slelab/common.hpp"
#include "slelab/special.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace slelab {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix of the
// three-term recurrence, weights are mu0 * (first eigenvector component)^2.
JacobiRule gauss_jacobi(int n, double alpha, double beta) {
    require(n >= 1, Guard::bad_argument, "gauss_jacobi: n >= 1");
    require(alpha > -1.0 && beta > -1.0, Guard::parameter_out_of_range,
            "gauss_jacobi: exponents must be > -1");

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        // diagonal a_k, subdiagonal b_k of the three-term recurrence
        double kk = k;
        double ak = (k == 0) ? (beta - alpha) / (ab + 2.0)
                             : (beta * beta - alpha * alpha) /
                                   ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0));
        J(k, k) = ak;
        if (k > 0) {
            double num, den;
            if (k == 1) {
                num = 4.0 * (1.0 + alpha) * (1.0 + beta);
                den = (ab + 2.0) * (ab + 2.0) * (ab + 3.0);
            } else {
                num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
                den = (2.0 * kk + ab) * (2.0 * kk + ab) * (2.0 * kk + ab + 1.0) * (2.0 * kk + ab - 1.0);
            }
            double bk = std::sqrt(num / den);
            J(k, k - 1) = bk;
            J(k - 1, k) = bk;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    double mu0 = std::exp((ab + 1.0) * std::log(2.0) + log_beta(alpha + 1.0, beta + 1.0));

    JacobiRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = es.eigenvalues()(k);
        double v0 = es.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& w) {
    require(x.size() == y.size() && x.size() == w.size() && x.size() >= 2,
            Guard::bad_argument, "fit_line: need >= 2 points");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    double det = sw * sxx - sx * sx;
    require(det > 0.0, Guard::degenerate_fit, "fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    double ybar = sy / sw, sse = 0, sst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (f.slope * x[i] + f.intercept);
        sse += w[i] * e * e;
        sst += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    f.r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
    return f;
}

} // namespace slelab
