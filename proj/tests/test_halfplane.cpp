#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cgw/chebyshev.hpp"
#include "cgw/errors.hpp"
#include "cgw/halfplane.hpp"

#include <cmath>

using namespace cgw;

namespace {

// sup |num - exact| / sup |exact| over nodes with |X| <= xmax
double rel_error(const HalfPlaneField& f, const std::function<double(double, double)>& exact, double xmax)
{
    const auto& g = f.xgrid();
    double e = 0.0, s = 0.0;
    for (size_t i = 0; i < f.ys().size(); ++i)
        for (int j = 0; j < g.N; ++j) {
            double X = g.x(j);
            if (std::abs(X) > xmax)
                continue;
            double v = exact(X, f.ys()[i]);
            e = std::max(e, std::abs(f.at(i, j) - v));
            s = std::max(s, std::abs(v));
        }
    return e / s;
}

// brute-force int f(W, Z) G(X, Y; W, Z) over [-8, 8] x [-1, 0]
double green_quadrature(const std::function<double(double, double)>& f, double X, double Y, double w0)
{
    std::vector<double> zw, zx, wx, ww;
    gauss_legendre(24, -1.0, 0.0, zx, zw);
    double acc = 0.0;
    const int panels = 128;
    for (int p = 0; p < panels; ++p) {
        double a = w0 - 8.0 + 16.0 * p / panels, b = a + 16.0 / panels;
        gauss_legendre(12, a, b, wx, ww);
        for (size_t q = 0; q < wx.size(); ++q)
            for (size_t r = 0; r < zx.size(); ++r)
                acc += ww[q] * zw[r] * f(wx[q], zx[r]) * green_halfplane(X, Y, wx[q], zx[r]);
    }
    return acc;
}

} // namespace

TEST_CASE("green function example value")
{
    CHECK(green_halfplane(0.0, -2.0, 0.0, -0.5) == doctest::Approx(std::log(5.0 / 3.0) / (2.0 * pi)).epsilon(1e-14));
    CHECK(green_halfplane(0.3, 0.0, 1.0, -0.5) == 0.0);
}

TEST_CASE("harmonic extension: Poisson-semigroup oracles")
{
    PeriodicGrid g{400.0, 8192};
    auto ys = default_y_nodes();
    SUBCASE("Lorentzian data")
    {
        std::vector<double> h(g.N);
        for (int j = 0; j < g.N; ++j)
            h[j] = 1.0 / (1.0 + g.x(j) * g.x(j));
        Warnings w;
        auto f = harmonic_extension(h, g, ys, 32, &w);
        CHECK(w.items.empty());
        double e = rel_error(f, [](double X, double Y) { return (1 - Y) / (X * X + (1 - Y) * (1 - Y)); }, 0.5 * g.L);
        CHECK(e <= 1e-6);
    }
    SUBCASE("constant data")
    {
        std::vector<double> h(g.N, 0.75);
        Warnings w;
        auto f = harmonic_extension(h, g, ys, 32, &w);
        CHECK(rel_error(f, [](double, double) { return 0.75; }, g.L) <= 1e-12);
        CHECK(w.items.size() == 1);
    }
    SUBCASE("single Fourier mode")
    {
        const double k = g.k(91);
        std::vector<double> h(g.N);
        for (int j = 0; j < g.N; ++j)
            h[j] = std::cos(k * g.x(j));
        auto f = harmonic_extension(h, g, ys);
        CHECK(rel_error(f, [k](double X, double Y) { return std::cos(k * X) * std::exp(k * Y); }, g.L) <= 1e-10);
    }
}

TEST_CASE("strip Green solve: separable mode against the ODE solution")
{
    PeriodicGrid g{400.0, 8192};
    const double k = g.k(223);
    // -Psi'' + k^2 Psi = 1 on the strip, Psi(0) = 0, Psi' = k Psi at Y = -1
    const double B = -std::exp(-k) / (2 * k * k), A = -1 / (k * k) - B;
    const double C = 1 / (k * k) + A * std::exp(-k) + B * std::exp(k);
    auto exact_mode = [&](double Y) {
        if (Y >= -1.0)
            return 1 / (k * k) + A * std::exp(k * Y) + B * std::exp(-k * Y);
        return C * std::exp(k * (Y + 1));
    };
    auto ys = default_y_nodes();
    auto f = strip_green_solve([k](double X, double Y) { return Y >= -1.0 ? std::cos(k * X) : 0.0; }, g, ys);
    double e = rel_error(f, [&](double X, double Y) { return std::cos(k * X) * exact_mode(Y); }, g.L);
    CHECK(e <= 1e-6);
}

TEST_CASE("strip Green solve: localised sources against brute-force quadrature")
{
    PeriodicGrid g{400.0, 8192};
    auto ys = default_y_nodes();
    struct Case {
        double w0;
        std::function<double(double, double)> f;
    };
    std::vector<Case> cases{
        {0.0, [](double X, double Y) { return Y >= -1.0 ? std::exp(-X * X) * Y * Y * (1 + Y) * (1 + Y) : 0.0; }},
        {1.5, [](double X, double Y) {
             double d = X - 1.5;
             return Y >= -1.0 ? std::exp(-d * d) * Y * Y * (1 + Y) * (1 + Y) * (1 + 0.5 * Y) : 0.0;
         }},
    };
    for (const auto& c : cases) {
        auto f = strip_green_solve(c.f, g, ys);
        double e = 0.0, s = 0.0;
        for (int jo : {0, 9, 26, 61}) {
            int j = g.center() + jo;
            for (size_t i = 0; i < ys.size(); ++i) {
                if (ys[i] > -1.2 || ys[i] < -12.0)
                    continue;
                double q = green_quadrature(c.f, g.x(j), ys[i], c.w0);
                e = std::max(e, std::abs(f.at(i, j) - q));
                s = std::max(s, std::abs(q));
            }
        }
        CHECK(s > 0.0);
        CHECK(e / s <= 1e-6);
    }
}

TEST_CASE("strip Green solve rejects sources outside the strip")
{
    PeriodicGrid g{20.0, 256};
    CHECK_THROWS_AS(strip_green_solve([](double, double Y) { return std::exp(Y); }, g, default_y_nodes()),
                    PreconditionError);
}

TEST_CASE("dirichlet_K with no source is the harmonic extension of the kinematic data")
{
    PeriodicGrid g{400.0, 8192};
    auto ys = default_y_nodes();
    std::vector<double> eta(g.N, 0.0);
    auto model = VorticityModel::point({0.0, -1.0}, 0.3);
    auto K = dirichlet_K(eta, [](double, double) { return 0.0; }, model, -0.3 / (4 * pi), g, ys);
    // psi_V on Y = 0 is (w/4pi) log((X^2+1)/(X^2+1)) = 0 with the phantom at (0, 1)
    CHECK(K.max_abs() <= 1e-14);
}

TEST_CASE("strip solver honours the Dirichlet data and the Laplacian")
{
    PeriodicGrid g{16.0 * pi, 1024};
    StripSolver S(g, 32);
    auto exact = S.from_function([](double X, double Y) { return std::sin(X) * std::exp(Y) + 0.1 * Y * Y; });
    // Lap(sin X e^Y) = 0, Lap(0.1 Y^2) = 0.2 on the strip
    RowMat f = RowMat::Constant(S.ny() + 1, g.N, 0.2);
    std::vector<double> h(g.N);
    for (int j = 0; j < g.N; ++j)
        h[j] = std::sin(g.x(j));
    auto psi = S.solve(f, h);
    auto tr = psi.trace();
    for (int j = 0; j < g.N; ++j)
        CHECK(tr[j] == doctest::Approx(h[j]).epsilon(1e-12));
    RowMat lap = psi.dX(2) + psi.dY(2);
    CHECK((lap.array() - 0.2).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("strip sampler reproduces the nodes and continues below the strip")
{
    PeriodicGrid g{16.0 * pi, 512};
    StripSolver S(g, 24);
    auto psi = S.from_function([](double X, double Y) { return std::cos(X) * std::exp(Y); });
    StripSampler sm(psi);
    for (double X : {0.0, 0.37, -2.2})
        for (double Y : {0.0, -0.3, -0.99, -1.7, -4.0}) {
            auto jet = sm.eval(X, Y);
            double v = std::cos(X) * std::exp(Y);
            CHECK(jet.v == doctest::Approx(v).epsilon(1e-9));
            CHECK(jet.y == doctest::Approx(v).epsilon(1e-8));
            CHECK(jet.x == doctest::Approx(-std::sin(X) * std::exp(Y)).epsilon(1e-8));
        }
}

TEST_CASE("weighted norm of a decaying harmonic function is finite and grid-reported")
{
    PeriodicGrid g{100.0, 2048};
    auto ys = default_y_nodes();
    HalfPlaneField f(g, ys);
    for (size_t i = 0; i < ys.size(); ++i)
        for (int j = 0; j < g.N; ++j) {
            double X = g.x(j), a = 1 - ys[i];
            f.at(i, j) = a / (X * X + a * a);  // w f = 1 exactly
        }
    auto r = weighted_norm(f, 0, 0.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.grid.find("N_X=2048") != std::string::npos);
    auto r1 = weighted_norm(f, 1, 0.5);
    CHECK(r1.value >= r.value);
}

TEST_CASE("image sums")
{
    const double L = 10.0, a = 1.3, X = 2.1;
    double direct = 0.0;
    for (int n = 1; n < 200000; ++n)
        direct += a / ((X + 2 * n * L) * (X + 2 * n * L) + a * a) + a / ((X - 2 * n * L) * (X - 2 * n * L) + a * a);
    CHECK(image_sum(X, a, L) == doctest::Approx(direct).epsilon(1e-5));
}
