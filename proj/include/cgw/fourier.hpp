#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace cgw {

using cplx = std::complex<double>;

// Uniform periodic grid X_j = -L + j*h on [-L, L), h = 2L/N.
struct PeriodicGrid {
    double L = 400.0;
    int N = 8192;

    double h() const { return 2.0 * L / N; }
    double x(int j) const { return -L + j * h(); }
    int center() const { return N / 2; }
    int modes() const { return N / 2 + 1; }
    double k(int m) const;
    std::vector<double> nodes() const;
};

// Real-to-complex FFTW wrapper for one grid size. Coefficients are unnormalised
// on forward; inverse divides by N. Not thread-safe (plans share buffers).
class Spectral1D {
public:
    explicit Spectral1D(PeriodicGrid g);
    ~Spectral1D();
    Spectral1D(const Spectral1D&) = delete;
    Spectral1D& operator=(const Spectral1D&) = delete;

    const PeriodicGrid& grid() const { return g_; }

    std::vector<cplx> forward(const std::vector<double>& f) const;
    std::vector<double> inverse(const std::vector<cplx>& c) const;

    std::vector<double> derivative(const std::vector<double>& f, int order) const;
    std::vector<double> multiplier(const std::vector<double>& f,
                                   const std::function<double(double)>& symbol) const;

    // Trigonometric interpolant of forward() coefficients at an arbitrary X.
    double evaluate(const std::vector<cplx>& c, double X, int dorder = 0) const;

private:
    PeriodicGrid g_;
    struct Impl;
    std::unique_ptr<Impl> p_;
};

// 10-point Lagrange interpolation of periodic samples.
double local_interp(const std::vector<double>& f, const PeriodicGrid& g, double X);

// Enforce f(X) = f(-X) on the periodic grid (f_j = f_{N-j}).
void symmetrize_even(std::vector<double>& f);
double odd_part_max(const std::vector<double>& f);

} // namespace cgw
