#pragma once

#include "cgw/solver.hpp"
#include "cgw/surface.hpp"
#include "cgw/vortical.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cgw {

struct TailFit {
    double R1 = 0.0, R2 = 0.0;
    double coefficient = 0.0;  // signed: value ~ coefficient / R^exponent
    double exponent = 0.0;
    double residual = 0.0;     // rms of the log residuals
    int samples = 0;
    bool sign_flip = false;
};

// Periodic trapezoid sum plus the fitted C/X^2 tails beyond |X| = L.
double excess_mass(const SurfaceProfile& eta);
double abs_mass(const SurfaceProfile& eta);
double excess_mass(const std::vector<double>& eta, const PeriodicGrid& g);

std::vector<double> bernoulli_residual(const WaveState& s);

// Least squares fit of log|value| against log R.
TailFit tail_fit(const std::vector<double>& R, const std::vector<double>& value);
// Same with the exponent held fixed (coefficient keeps its sign).
TailFit tail_fit_fixed(const std::vector<double>& R, const std::vector<double>& value, double exponent);

// Surface samples (X_j, f_j) with R1 <= X_j <= R2.
void surface_window(const PeriodicGrid& g, const std::vector<double>& f, double R1, double R2,
                    std::vector<double>& R, std::vector<double>& v);

struct IdentityTerms {
    double surface_UU = 0.0;   // int |U|^2 as a surface flux
    double surface_UV = 0.0;   // int U.V as a surface flux
    double surface_cV = 0.0;   // int c.V as a surface flux
    double sides = 0.0;        // flux of Phi (u - c) through |x1| = L
    double exterior = 0.0;     // |x1| > L with U neglected
    double integral = 0.0;
    double p1 = 0.0;
};

double dipole_from_identity(const WaveState& s, IdentityTerms* terms = nullptr);

struct TailWindow {
    double R1, R2;
    static TailWindow defaults(const PeriodicGrid& g) { return {0.25 * g.L, 0.75 * g.L}; }
};
double dipole_from_tail(const WaveState& s, std::optional<TailWindow> w = std::nullopt,
                        TailFit* fit = nullptr);

// |u| along the physical surface, for the velocity tail exponent.
std::vector<double> surface_speed(const WaveState& s);

struct AngularMomentum {
    std::vector<double> R, I;
    double slope = 0.0;
    double fit_R1 = 0.0, fit_R2 = 0.0;
};

struct AngularProblem {
    std::function<Vec2(const Vec2&)> u;
    std::function<double(double)> surface;          // x2 = surface(x1)
    std::vector<PointVortex> singular;              // self-induced parts to desingularise
};

AngularMomentum angular_momentum_profile(const AngularProblem& prob, const std::vector<double>& R,
                                         double fit_from = 0.0);
AngularMomentum angular_momentum_growth(const WaveState& s, const std::vector<double>& R,
                                        double fit_from = 0.0);

struct FarFieldRow {
    double r;
    double error;   // |V - dipole(m)|
    double speed;   // |V|
};
struct SurfaceNVRow {
    double x;
    double scaled;  // |x|^n N.V on S
};
struct FarFieldReport {
    ImpulseVector m;
    std::vector<FarFieldRow> rows;
    double error_slope = 0.0;
    double speed_slope = 0.0;
    std::vector<SurfaceNVRow> surface;
    double surface_limit = 0.0;
    double expected_surface_limit = 0.0;
};

FarFieldReport far_field_report(const VorticityModel& model, const WaveState* state,
                                const std::vector<double>& radii,
                                std::optional<Vec3> direction = std::nullopt);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> geometric_radii(double r1, double r2, int n);

struct DipoleReport {
    ImpulseVector m;
    double p_identity = 0.0;
    IdentityTerms identity;
    double p_tail = 0.0;
    TailFit eta_tail_pinned;
    TailFit eta_tail;
    TailFit speed_tail;
    double excess_mass = 0.0;
    double abs_mass = 0.0;
    double bernoulli_sup = 0.0;
    double kinematic_sup = 0.0;
    double angular_slope = 0.0;
    AngularMomentum angular;
    bool eta_sign_change = false;
    bool eta_positive_outer = false;
    std::vector<std::string> warnings;
};

struct ReportOptions {
    std::optional<TailWindow> tail_window;    // default [0.25 L, 0.75 L]
    std::optional<TailWindow> exponent_window;  // default same as tail_window
    bool angular = true;
};

DipoleReport dipole_report(const WaveState& s, const ReportOptions& opt = {});

// |(u - c).N| on S evaluated through the physical-coordinate sampler.
std::vector<double> kinematic_residual(const WaveState& s);

} // namespace cgw
