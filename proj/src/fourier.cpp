#include "cgw/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace cgw {

double PeriodicGrid::k(int m) const { return std::numbers::pi * m / L; }

std::vector<double> PeriodicGrid::nodes() const
{
    std::vector<double> x(N);
    for (int j = 0; j < N; ++j)
        x[j] = this->x(j);
    return x;
}

struct Spectral1D::Impl {
    int n;
    double* rbuf;
    fftw_complex* cbuf;
    fftw_plan fwd, bwd;
    Impl(int n_) : n(n_)
    {
        rbuf = fftw_alloc_real(n);
        cbuf = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(n, rbuf, cbuf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, cbuf, rbuf, FFTW_ESTIMATE);
    }
    ~Impl()
    {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }
};

Spectral1D::Spectral1D(PeriodicGrid g) : g_(g)
{
    if (g.N < 4 || g.N % 2 != 0 || !(g.L > 0))
        throw std::invalid_argument("periodic grid needs even N >= 4 and L > 0");
    p_ = std::make_unique<Impl>(g.N);
}

Spectral1D::~Spectral1D() = default;

std::vector<cplx> Spectral1D::forward(const std::vector<double>& f) const
{
    std::memcpy(p_->rbuf, f.data(), sizeof(double) * g_.N);
    fftw_execute(p_->fwd);
    std::vector<cplx> c(g_.modes());
    std::memcpy(reinterpret_cast<double*>(c.data()), p_->cbuf, sizeof(fftw_complex) * g_.modes());
    return c;
}

std::vector<double> Spectral1D::inverse(const std::vector<cplx>& c) const
{
    std::memcpy(p_->cbuf, c.data(), sizeof(fftw_complex) * g_.modes());
    fftw_execute(p_->bwd);
    std::vector<double> f(p_->rbuf, p_->rbuf + g_.N);
    double s = 1.0 / g_.N;
    for (auto& v : f)
        v *= s;
    return f;
}

std::vector<double> Spectral1D::derivative(const std::vector<double>& f, int order) const
{
    if (order == 0)
        return f;
    auto c = forward(f);
    const int M = g_.modes();
    cplx ik0(0, 1);
    for (int m = 0; m < M; ++m) {
        cplx fac = std::pow(ik0 * g_.k(m), order);
        c[m] *= fac;
    }
    if (order % 2 == 1)
        c[M - 1] = 0.0;
    return inverse(c);
}

std::vector<double> Spectral1D::multiplier(const std::vector<double>& f,
                                           const std::function<double(double)>& symbol) const
{
    auto c = forward(f);
    for (int m = 0; m < g_.modes(); ++m)
        c[m] *= symbol(g_.k(m));
    return inverse(c);
}

double Spectral1D::evaluate(const std::vector<cplx>& c, double X, int dorder) const
{
    // c_m multiplies exp(i k_m (X + L)); interior modes count twice.
    const int M = g_.modes();
    const double t = X + g_.L;
    cplx step = std::polar(1.0, g_.k(1) * t);
    cplx ph = 1.0;
    cplx ik(0, 1);
    double s = 0.0;
    for (int m = 0; m < M; ++m) {
        cplx term = c[m] * ph;
        if (dorder > 0)
            term *= std::pow(ik * g_.k(m), dorder);
        double w = (m == 0 || m == M - 1) ? 1.0 : 2.0;
        if (m == M - 1 && dorder % 2 == 1)
            w = 0.0;
        s += w * term.real();
        ph *= step;
        if ((m & 63) == 63)
            ph = std::polar(1.0, g_.k(m + 1) * t);
    }
    return s / g_.N;
}

double local_interp(const std::vector<double>& f, const PeriodicGrid& g, double X)
{
    constexpr int n = 10;
    double t = (X + g.L) / g.h();
    int j0 = static_cast<int>(std::floor(t));
    double s = t - j0 + (n / 2 - 1);
    double acc = 0.0;
    for (int l = 0; l < n; ++l) {
        double num = 1.0, den = 1.0;
        for (int q = 0; q < n; ++q) {
            if (q == l)
                continue;
            num *= s - q;
            den *= l - q;
        }
        int j = ((j0 - (n / 2 - 1) + l) % g.N + g.N) % g.N;
        acc += num / den * f[j];
    }
    return acc;
}

void symmetrize_even(std::vector<double>& f)
{
    const int N = static_cast<int>(f.size());
    for (int j = 1; j < N / 2; ++j) {
        double a = 0.5 * (f[j] + f[N - j]);
        f[j] = f[N - j] = a;
    }
}

double odd_part_max(const std::vector<double>& f)
{
    const int N = static_cast<int>(f.size());
    double m = 0.0;
    for (int j = 1; j < N / 2; ++j)
        m = std::max(m, 0.5 * std::abs(f[j] - f[N - j]));
    return m;
}

} // namespace cgw
