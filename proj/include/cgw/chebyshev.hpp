#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cgw {

// Chebyshev-Lobatto nodes on the strip [-1, 0]: Y_0 = 0, Y_n = -1.
struct ChebStrip {
    int n;
    std::vector<double> y;
    Eigen::MatrixXd D;  // d/dY
    Eigen::MatrixXd D2;
    std::vector<double> quad;  // Clenshaw-Curtis weights on [-1, 0]

    explicit ChebStrip(int n);

    // Barycentric interpolation row for a point in [-1, 0].
    Eigen::RowVectorXd interp_row(double Y) const;
};

// Finite-difference weights (Fornberg) at x0 for derivatives 0..m on nodes xs.
// Result(k, j) is the weight of xs[j] for the k-th derivative.
Eigen::MatrixXd fornberg_weights(double x0, const std::vector<double>& xs, int m);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

} // namespace cgw
