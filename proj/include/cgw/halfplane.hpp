#pragma once

#include "cgw/chebyshev.hpp"
#include "cgw/fourier.hpp"
#include "cgw/vortical.hpp"

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace cgw {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Chebyshev nodes on [-1, 0] followed by geometrically stretched nodes down to -H.
std::vector<double> default_y_nodes(int ny_strip = 32, double H = 40.0, double ratio = 1.25);

// Gridded scalar on the periodic X grid times a decreasing list of Y nodes
// (ys[0] = 0). Rows are Y levels, columns X nodes.
class HalfPlaneField {
public:
    HalfPlaneField() = default;
    HalfPlaneField(PeriodicGrid g, std::vector<double> ys);
    HalfPlaneField(PeriodicGrid g, std::vector<double> ys, RowMat values);

    const PeriodicGrid& xgrid() const { return g_; }
    const std::vector<double>& ys() const { return ys_; }
    RowMat& values() { return v_; }
    const RowMat& values() const { return v_; }
    double& at(int iy, int jx) { return v_(iy, jx); }
    double at(int iy, int jx) const { return v_(iy, jx); }

    // Spectral in X, local Fornberg stencils in Y.
    HalfPlaneField dx(int order) const;
    HalfPlaneField dy(int order) const;
    // Local Lagrange interpolation (10 points in X, 6 in Y).
    double eval(double X, double Y) const;

    std::vector<double> row(int iy) const;
    double max_abs() const { return v_.cwiseAbs().maxCoeff(); }

private:
    PeriodicGrid g_;
    std::vector<double> ys_;
    RowMat v_;
};

class StripSolver;

// Field stored on the Chebyshev strip nodes; below Y = -1 it continues as the
// bounded harmonic function with the bottom row as trace (mode k decays like
// exp(|k|(Y+1))).
struct StripField {
    const StripSolver* ctx = nullptr;
    RowMat v;  // (n+1) x N

    RowMat dX(int order) const;
    RowMat dY(int order) const;
    RowMat dXY() const;
    std::vector<double> trace() const;  // Y = 0 row
    HalfPlaneField sample(const std::vector<double>& ys) const;

    StripField& operator+=(const StripField& o);
    StripField operator-(const StripField& o) const;
};

// Solves Lap(Psi) = f in the flattened half-plane with Psi = h on Y = 0, f
// supported in the strip, bounded below.
class StripSolver {
public:
    StripSolver(PeriodicGrid g, int ny);
    ~StripSolver();

    const PeriodicGrid& xgrid() const { return fft_->grid(); }
    const ChebStrip& cheb() const { return cheb_; }
    const Spectral1D& fft() const { return *fft_; }
    int ny() const { return cheb_.n; }

    StripField solve(const RowMat& f, const std::vector<double>& h) const;
    StripField zero() const;
    StripField from_function(const std::function<double(double, double)>& fn) const;

    RowMat rows_dX(const RowMat& v, int order) const;

private:
    std::unique_ptr<Spectral1D> fft_;
    ChebStrip cheb_;
    struct Factor;
    std::vector<std::unique_ptr<Factor>> lu_;
    std::unique_ptr<Factor> factor(int m) const;
};

// Point evaluation of a strip field and its derivatives anywhere in Y <= 0.
class StripSampler {
public:
    explicit StripSampler(const StripField& f);
    struct Jet {
        double v, x, y, xx, xy, yy;
    };
    Jet eval(double X, double Y) const;

private:
    const StripSolver* ctx_;
    RowMat v_, vx_, vy_, vxx_, vxy_, vyy_;
    std::vector<cplx> bottom_, bottom_y_;
    std::vector<double> lagrange_(double X, int& j0) const;
};

struct Warnings {
    std::vector<std::string> items;
    void add(std::string s) { items.push_back(std::move(s)); }
};

// Dirichlet Green's function of -Lap on the lower half-plane.
double green_halfplane(double X, double Y, double W, double Z);

// Bounded harmonic extension of periodic-grid samples h, with the far-edge
// closure (fitted C/X^2 tail beyond L plus periodic-image removal) applied when
// h decays at the grid edge.
HalfPlaneField harmonic_extension(const std::vector<double>& h, const PeriodicGrid& g,
                                  const std::vector<double>& ys, int ny_strip = 32,
                                  Warnings* warn = nullptr);

// Psi = int f G over the strip source f(X, Y), -1 <= Y <= 0.
HalfPlaneField strip_green_solve(const std::function<double(double, double)>& f,
                                 const PeriodicGrid& g, const std::vector<double>& ys,
                                 int ny_strip = 32);

// K(eta) f = -strip_green_solve(f) + harmonic_extension(-(c1 eta + psi_V(X, eta))).
HalfPlaneField dirichlet_K(const std::vector<double>& eta, const std::function<double(double, double)>& f,
                           const VorticityModel& model, double c1, const PeriodicGrid& g,
                           const std::vector<double>& ys, int ny_strip = 32);

struct WeightedNormReport {
    int order = 0;
    double alpha = 0.0;
    double value = 0.0;
    double sup_part = 0.0;
    double holder_part = 0.0;
    std::string grid;
};

WeightedNormReport weighted_norm(const HalfPlaneField& f, int order, double alpha);
WeightedNormReport weighted_norm(const std::vector<double>& boundary, const PeriodicGrid& g,
                                 int order, double alpha);

// Sum over nonzero periodic images n of a/((X + 2nL)^2 + a^2).
double image_sum(double X, double a, double L);

} // namespace cgw
