#pragma once

#include "cgw/fourier.hpp"
#include "cgw/halfplane.hpp"
#include "cgw/vortical.hpp"

#include <vector>

namespace cgw {

// a(Y) = (1 - Y^2)^3 on [-1, 1], zero outside; a(0) = 1, a'(0) = 0 and a, a', a''
// all vanish at Y = -1.
struct Cutoff {
    double operator()(double Y) const;
    double d1(double Y) const;
    double d2(double Y) const;
    double max_abs_d1() const;
};

struct PhysicalParams {
    double g = 1.0;
    double sigma = 1.0;
    Cutoff a;
    double epsilon = 0.1;  // decay exponent bookkeeping only
    double moment_order = 5.0;
};

struct SurfaceProfile {
    PeriodicGrid grid;
    std::vector<double> eta, eta_x, eta_xx;

    static SurfaceProfile from_samples(const Spectral1D& fft, std::vector<double> eta);
    static SurfaceProfile flat(const PeriodicGrid& g);
    // local interpolation of eta, eta_x at an arbitrary X
    double eta_at(double X) const;
    double eta_x_at(double X) const;
};

double flatten_coords(const SurfaceProfile& eta, const Cutoff& a, int jx, double Y);
double flatten_coords(double eta, const Cutoff& a, double Y);
// Inverts x2 = Y + eta a(Y) for Y (MappingError when the map degenerates).
double unflatten(double eta, const Cutoff& a, double x2);

// Derivatives of psi at one point (flattened coordinates).
struct PsiJet {
    double y, xx, xy, yy;
};
struct EtaJet {
    double e, ex, exx;
};

double f1_point(const PsiJet& p, const EtaJet& e, double a, double aY, double aYY);
double f2_point(double psi_x, double psi_y, const EtaJet& e, const Vec2& V, double sigma);

RowMat assemble_f1(const StripField& psi, const SurfaceProfile& eta, const Cutoff& a);
HalfPlaneField assemble_f1(const HalfPlaneField& psi, const SurfaceProfile& eta, const Cutoff& a);

// V at the physical surface points (X_j, eta_j).
std::vector<Vec2> surface_velocity_V(const VorticityModel& model, const SurfaceProfile& eta);

std::vector<double> assemble_f2(const StripField& psi, const SurfaceProfile& eta,
                                const VorticityModel& model, double sigma);

// Boundary data -(c1 eta + psi_V(X, eta)) of the Dirichlet problem.
std::vector<double> kinematic_data(const SurfaceProfile& eta, const VorticityModel& model, double c1);

struct Residual {
    RowMat F1;
    std::vector<double> F2;
    double F1_norm = 0.0;  // weighted sup on the strip nodes
    double F2_norm = 0.0;  // weighted sup on T
};

Residual residual_F(const StripField& psi, const SurfaceProfile& eta, const VorticityModel& model,
                    double c1, const PhysicalParams& params);

struct Linearized {
    StripField dpsi;
    std::vector<double> deta;
};
Linearized linearize_trivial(const StripField& dpsi, const std::vector<double>& deta,
                             const Spectral1D& fft, const PhysicalParams& params);

enum class SurfaceKernel { G, G1, G2 };

std::vector<double> apply_surface_kernel(const std::vector<double>& rhs, const Spectral1D& fft,
                                         const PhysicalParams& params, double c, SurfaceKernel k);

double weighted_sup_strip(const RowMat& F, const StripSolver& s);
double weighted_sup_surface(const std::vector<double>& f, const PeriodicGrid& g);

} // namespace cgw
