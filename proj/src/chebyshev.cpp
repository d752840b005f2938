#include "cgw/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cgw {

ChebStrip::ChebStrip(int n_) : n(n_)
{
    if (n < 2)
        throw std::invalid_argument("Chebyshev strip needs n >= 2");
    const double pi = std::numbers::pi;
    std::vector<double> t(n + 1);
    y.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        t[i] = std::cos(pi * i / n);
        y[i] = 0.5 * (t[i] - 1.0);
    }
    Eigen::MatrixXd Dt = Eigen::MatrixXd::Zero(n + 1, n + 1);
    auto c = [&](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            if (i != j)
                Dt(i, j) = c(i) / c(j) * ((i + j) % 2 ? -1.0 : 1.0) / (t[i] - t[j]);
    // negative-sum trick for the diagonal
    for (int i = 0; i <= n; ++i)
        Dt(i, i) = -Dt.row(i).sum();
    D = 2.0 * Dt;
    D2 = D * D;

    // Clenshaw-Curtis on [-1,1], halved for [-1,0].
    quad.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        double theta = pi * i / n;
        double s = 0.0;
        for (int k = 0; k <= n / 2; ++k) {
            double b = (k == 0 || 2 * k == n) ? 1.0 : 2.0;
            s += b / (1.0 - 4.0 * k * k) * std::cos(2.0 * k * theta);
        }
        quad[i] = c(i) == 2.0 ? s / n : 2.0 * s / n;
        quad[i] *= 0.5;
    }
}

Eigen::RowVectorXd ChebStrip::interp_row(double Y) const
{
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n + 1);
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        double d = Y - y[i];
        if (d == 0.0) {
            r.setZero();
            r(i) = 1.0;
            return r;
        }
        double w = (i % 2 ? -1.0 : 1.0) * ((i == 0 || i == n) ? 0.5 : 1.0);
        r(i) = w / d;
        sum += r(i);
    }
    return r / sum;
}

Eigen::MatrixXd fornberg_weights(double x0, const std::vector<double>& xs, int m)
{
    const int n = static_cast<int>(xs.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + 1, n);
    double c1 = 1.0, c4 = xs[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
            c(0, j) = c4 * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w)
{
    x.resize(n);
    w.resize(n);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15)
                break;
        }
        double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
        x[i] = xm - xl * z;
        x[n - 1 - i] = xm + xl * z;
        w[i] = w[n - 1 - i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    }
}

} // namespace cgw
