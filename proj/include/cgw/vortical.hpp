#pragma once

#include "cgw/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cgw {

enum class ModelKind { PointSet, RadialPatch, Sampled3D };

struct PointVortex {
    Vec2 center;
    double strength;
};

// Radially symmetric vorticity about `center`, piecewise linear in r through
// the samples (r_i, value_i); zero beyond the last sample radius.
struct RadialPatch {
    Vec2 center;
    std::vector<double> r;
    std::vector<double> value;

    double radius() const { return r.empty() ? 0.0 : r.back(); }
    double profile(double s) const;
    double circulation() const;                  // 2*pi * int w(r) r dr
    double circulation_within(double s) const;   // same, truncated at s
};

struct Sampled3D {
    std::vector<Vec3> pos;
    std::vector<Vec3> omega;
    std::vector<double> weight;
};

struct VorticityModel {
    ModelKind kind = ModelKind::PointSet;
    std::vector<PointVortex> points;
    std::vector<RadialPatch> patches;
    Vec2 phantom{0.0, 1.0};
    Sampled3D samples;
    double quad_tol = 1e-8;

    static VorticityModel point(Vec2 center, double strength, Vec2 phantom = {0.0, 1.0});
    static VorticityModel none();

    int dim() const { return kind == ModelKind::Sampled3D ? 3 : 2; }
    double total_strength() const;
    bool empty() const;
    // Throws PreconditionError when a documented invariant fails.
    void validate() const;
};

struct ImpulseVector {
    int n = 2;
    Vec3 m{0.0, 0.0, 0.0};
};

// A sampled-3d evaluation carries an error estimate when it lands too close
// to the samples for the quadrature to be trusted.
struct Velocity3 {
    Vec3 v{0.0, 0.0, 0.0};
    bool near_singular = false;
    double error_estimate = 0.0;
};

Vec2 biot_savart_2d(const VorticityModel& model, const Vec2& x);
double stream_function_2d(const VorticityModel& model, const Vec2& x);
// Velocity induced by everything except the point vortex with index `skip`
// (the regular part at that vortex's own center).
Vec2 biot_savart_2d_excluding(const VorticityModel& model, const Vec2& x, int skip);

Velocity3 biot_savart_3d(const VorticityModel& model, const Vec3& x);
ImpulseVector vortex_impulse(const VorticityModel& model);
Vec3 dipole_far_field(const ImpulseVector& m, const Vec3& x);
Vec2 dipole_far_field(const ImpulseVector& m, const Vec2& x);
Vec3 net_vorticity_3d(const VorticityModel& model);
double moment_norm(const VorticityModel& model, double k);

// Vortex ring of circulation `gamma` and radius R in the plane normal to e3,
// sampled as n equal filament segments.
VorticityModel vortex_ring_model(const Vec3& center, double R, double gamma, int n);
// Vorticity = discrete curl (central differences, spacing h) of the vector
// potential amp * exp(-|x - center|^2 / s^2) on a (2m+1)^3 lattice.
VorticityModel curl_lattice_model(const Vec3& center, double s, const Vec3& amp, int m);

// gamma_2 = 2*pi, gamma_3 = 4*pi.
double gamma_n(int n);

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

} // namespace cgw
