#include "cgw/vortical.hpp"

#include "cgw/chebyshev.hpp"
#include "cgw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace cgw {

namespace {

constexpr double inv2pi = 0.5 / pi;

void check_profile(const RadialPatch& p)
{
    if (p.r.size() < 2 || p.r.size() != p.value.size())
        throw PreconditionError("radial patch needs >= 2 matching (r, value) samples");
    if (p.r.front() < 0.0)
        throw PreconditionError("radial patch radii must be nonnegative");
    for (size_t i = 1; i < p.r.size(); ++i)
        if (!(p.r[i] > p.r[i - 1]))
            throw PreconditionError("radial patch radii must increase");
}

// Linear piece w = a + b r on segment i.
void segment_coeffs(const RadialPatch& p, size_t i, double& a, double& b)
{
    double r0 = p.r[i], r1 = p.r[i + 1];
    b = (p.value[i + 1] - p.value[i]) / (r1 - r0);
    a = p.value[i] - b * r0;
}

// int_{lo}^{hi} (a + b r) r^(1+e) dr for e in {0} and the log-weighted variant.
double prim_r(double a, double b, double r) { return a * r * r / 2.0 + b * r * r * r / 3.0; }
double prim_rlog(double a, double b, double r)
{
    if (r <= 0.0)
        return 0.0;
    double L = std::log(r);
    return a * r * r * (L / 2.0 - 0.25) + b * r * r * r * (L / 3.0 - 1.0 / 9.0);
}

// Radial Gauss nodes on each profile segment, clipped to [lo, hi].
void radial_nodes(const RadialPatch& p, double lo, double hi, std::vector<double>& r,
                  std::vector<double>& w)
{
    r.clear();
    w.clear();
    std::vector<double> gx, gw;
    for (size_t i = 0; i + 1 < p.r.size(); ++i) {
        double a = std::max(lo, p.r[i]), b = std::min(hi, p.r[i + 1]);
        if (!(b > a))
            continue;
        gauss_legendre(6, a, b, gx, gw);
        for (size_t q = 0; q < gx.size(); ++q) {
            r.push_back(gx[q]);
            w.push_back(gw[q] * p.profile(gx[q]) * gx[q]);
        }
    }
}

// Trapezoid in theta over a set of radial nodes, adaptively doubled.
Vec2 patch_ring_velocity(const RadialPatch& p, const std::vector<double>& r,
                         const std::vector<double>& w, const Vec2& x, double tol)
{
    auto sum = [&](int M) {
        Vec2 v{0.0, 0.0};
        double dth = 2.0 * pi / M;
        for (int j = 0; j < M; ++j) {
            double th = (j + 0.5) * dth;
            double cs = std::cos(th), sn = std::sin(th);
            for (size_t q = 0; q < r.size(); ++q) {
                Vec2 d{x[0] - p.center[0] - r[q] * cs, x[1] - p.center[1] - r[q] * sn};
                double s2 = norm2(d);
                double f = w[q] * dth / s2;
                v[0] -= f * d[1];
                v[1] += f * d[0];
            }
        }
        return inv2pi * v;
    };
    if (r.empty())
        return {0.0, 0.0};
    int M = 32;
    Vec2 prev = sum(M);
    for (M = 64; M <= 16384; M *= 2) {
        Vec2 cur = sum(M);
        if (norm(cur - prev) < tol)
            return cur;
        prev = cur;
    }
    throw ToleranceError(fmt::format("patch quadrature did not reach {:g} at ({:g}, {:g})", tol,
                                     x[0], x[1]));
}

Vec2 patch_velocity(const RadialPatch& p, const Vec2& x, double tol)
{
    Vec2 d = x - p.center;
    double s = norm(d);
    double R = p.radius();
    std::vector<double> r, w;
    if (s > R) {
        radial_nodes(p, 0.0, R, r, w);
        return patch_ring_velocity(p, r, w, x, tol);
    }
    if (s < 1e-14 * std::max(1.0, R))
        return {0.0, 0.0};
    // Shell of one radial cell around the evaluation radius: its inner half acts
    // as a centred vortex, its outer half induces nothing inside.
    double cell = R / 64.0;
    double lo = std::max(0.0, s - cell), hi = std::min(R, s + cell);
    Vec2 v{0.0, 0.0};
    radial_nodes(p, 0.0, lo, r, w);
    v = v + patch_ring_velocity(p, r, w, x, tol);
    radial_nodes(p, hi, R, r, w);
    v = v + patch_ring_velocity(p, r, w, x, tol);
    double dG = p.circulation_within(s) - p.circulation_within(lo);
    v = v + (inv2pi * dG / (s * s)) * perp(d);
    return v;
}

double patch_stream(const RadialPatch& p, const Vec2& x)
{
    double s = norm(x - p.center);
    double R = p.radius();
    if (s >= R)
        return inv2pi * p.circulation() * std::log(s);
    double acc = 0.0;
    for (size_t i = 0; i + 1 < p.r.size(); ++i) {
        double lo = std::max(s, p.r[i]), hi = p.r[i + 1];
        if (!(hi > lo))
            continue;
        double a, b;
        segment_coeffs(p, i, a, b);
        acc += prim_rlog(a, b, hi) - prim_rlog(a, b, lo);
    }
    double G = p.circulation_within(s);
    double lg = s > 0.0 ? G * std::log(s) : 0.0;
    return inv2pi * lg + acc;
}

void check_distinct(const Vec2& x, const Vec2& c, const char* what)
{
    if (norm(x - c) < 1e-14 * std::max(1.0, norm(c)))
        throw SingularPointError(fmt::format("evaluation at {} ({:g}, {:g})", what, c[0], c[1]));
}

} // namespace

double RadialPatch::profile(double s) const
{
    if (r.empty() || s < r.front() || s > r.back())
        return 0.0;
    auto it = std::upper_bound(r.begin(), r.end(), s);
    size_t i = std::min<size_t>(std::max<long>(it - r.begin(), 1) - 1, r.size() - 2);
    double t = (s - r[i]) / (r[i + 1] - r[i]);
    return (1.0 - t) * value[i] + t * value[i + 1];
}

double RadialPatch::circulation_within(double s) const
{
    double acc = 0.0;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
        double lo = r[i], hi = std::min(s, r[i + 1]);
        if (!(hi > lo))
            break;
        double a, b;
        segment_coeffs(*this, i, a, b);
        acc += prim_r(a, b, hi) - prim_r(a, b, lo);
    }
    return 2.0 * pi * acc;
}

double RadialPatch::circulation() const { return circulation_within(radius()); }

VorticityModel VorticityModel::point(Vec2 center, double strength, Vec2 phantom)
{
    VorticityModel m;
    m.kind = ModelKind::PointSet;
    m.points.push_back({center, strength});
    m.phantom = phantom;
    return m;
}

VorticityModel VorticityModel::none() { return VorticityModel{}; }

double VorticityModel::total_strength() const
{
    double s = 0.0;
    for (const auto& p : points)
        s += p.strength;
    for (const auto& p : patches)
        s += p.circulation();
    return s;
}

bool VorticityModel::empty() const
{
    if (kind == ModelKind::Sampled3D)
        return samples.pos.empty();
    return points.empty() && patches.empty();
}

void VorticityModel::validate() const
{
    if (kind == ModelKind::Sampled3D) {
        const auto& s = samples;
        if (s.pos.size() != s.omega.size() || s.pos.size() != s.weight.size())
            throw PreconditionError("sampled-3d arrays differ in length");
        double scale = 0.0, ext = 0.0;
        Vec3 net{0, 0, 0};
        double sym[3][3] = {};
        for (size_t i = 0; i < s.pos.size(); ++i) {
            if (!(s.weight[i] > 0.0))
                throw PreconditionError("sampled-3d weights must be positive");
            scale += s.weight[i] * norm(s.omega[i]);
            ext = std::max(ext, norm(s.pos[i]));
            net = net + s.weight[i] * s.omega[i];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    sym[a][b] += s.weight[i] * (s.omega[i][a] * s.pos[i][b] + s.omega[i][b] * s.pos[i][a]);
        }
        // weak divergence against the test functions x_a and x_a x_b
        double res = norm(net) * std::max(ext, 1.0);
        for (auto& row : sym)
            for (double v : row)
                res = std::max(res, std::abs(v));
        if (res > quad_tol * std::max(1.0, scale * std::max(ext, 1.0)))
            throw PreconditionError(fmt::format("sampled-3d vorticity is not divergence free (weak residual {:.3g})", res));
        return;
    }
    for (const auto& p : points)
        if (!(p.center[1] < 0.0))
            throw PreconditionError(fmt::format("vortex at ({:g}, {:g}) is not below the surface",
                                                p.center[0], p.center[1]));
    if (phantom[1] < 0.0)
        throw PreconditionError("phantom center must lie in the closed upper half-plane");
    for (const auto& p : patches) {
        check_profile(p);
        if (!(p.center[1] + p.radius() < 0.0))
            throw PreconditionError("patch support reaches the surface");
    }
}

double gamma_n(int n) { return n == 3 ? 4.0 * pi : 2.0 * pi; }

Vec2 biot_savart_2d_excluding(const VorticityModel& model, const Vec2& x, int skip)
{
    if (model.kind == ModelKind::Sampled3D)
        throw PreconditionError("biot_savart_2d needs a planar model");
    Vec2 v{0.0, 0.0};
    for (size_t i = 0; i < model.points.size(); ++i) {
        if (static_cast<int>(i) == skip)
            continue;
        const auto& p = model.points[i];
        check_distinct(x, p.center, "vortex center");
        Vec2 d = x - p.center;
        v = v + (inv2pi * p.strength / norm2(d)) * perp(d);
    }
    for (const auto& p : model.patches)
        v = v + patch_velocity(p, x, model.quad_tol);
    double w = model.total_strength();
    if (w != 0.0) {
        check_distinct(x, model.phantom, "phantom center");
        Vec2 d = x - model.phantom;
        v = v - (inv2pi * w / norm2(d)) * perp(d);
    }
    return v;
}

Vec2 biot_savart_2d(const VorticityModel& model, const Vec2& x)
{
    return biot_savart_2d_excluding(model, x, -1);
}

double stream_function_2d(const VorticityModel& model, const Vec2& x)
{
    if (model.kind == ModelKind::Sampled3D)
        throw PreconditionError("stream_function_2d needs a planar model");
    double s = 0.0;
    for (const auto& p : model.points) {
        check_distinct(x, p.center, "vortex center");
        s += inv2pi * p.strength * std::log(norm(x - p.center));
    }
    for (const auto& p : model.patches)
        s += patch_stream(p, x);
    double w = model.total_strength();
    if (w != 0.0) {
        check_distinct(x, model.phantom, "phantom center");
        s -= inv2pi * w * std::log(norm(x - model.phantom));
    }
    return s;
}

Velocity3 biot_savart_3d(const VorticityModel& model, const Vec3& x)
{
    if (model.kind != ModelKind::Sampled3D)
        throw PreconditionError("biot_savart_3d needs a sampled-3d model");
    const auto& s = model.samples;
    Velocity3 out;
    double dmin = INFINITY, hmin = INFINITY;
    for (size_t i = 0; i < s.pos.size(); ++i) {
        Vec3 d = x - s.pos[i];
        double r = norm(d);
        dmin = std::min(dmin, r);
        hmin = std::min(hmin, std::cbrt(s.weight[i]));
        if (r == 0.0) {
            out.near_singular = true;
            continue;
        }
        out.v = out.v + (s.weight[i] / (4.0 * pi * r * r * r)) * cross(s.omega[i], d);
    }
    if (!s.pos.empty() && dmin < 2.0 * hmin) {
        out.near_singular = true;
        double mag = 0.0;
        for (size_t i = 0; i < s.pos.size(); ++i)
            mag = std::max(mag, norm(s.omega[i]));
        // one cell of the nearest sample's contribution
        out.error_estimate = mag * hmin / (4.0 * pi) * std::max(1.0, hmin / std::max(dmin, 1e-300));
    }
    return out;
}

ImpulseVector vortex_impulse(const VorticityModel& model)
{
    ImpulseVector out;
    out.n = model.dim();
    if (model.kind == ModelKind::Sampled3D) {
        Vec3 acc{0, 0, 0};
        const auto& s = model.samples;
        for (size_t i = 0; i < s.pos.size(); ++i)
            acc = acc + s.weight[i] * cross(s.omega[i], s.pos[i]);
        out.m = -0.5 * acc;
        return out;
    }
    Vec2 acc{0.0, 0.0};
    for (const auto& p : model.points)
        acc = acc + p.strength * perp(p.center - model.phantom);
    std::vector<double> r, w, gx, gw;
    for (const auto& p : model.patches) {
        radial_nodes(p, 0.0, p.radius(), r, w);
        const int M = 64;
        for (int j = 0; j < M; ++j) {
            double th = 2.0 * pi * (j + 0.5) / M;
            for (size_t q = 0; q < r.size(); ++q) {
                Vec2 y{p.center[0] + r[q] * std::cos(th), p.center[1] + r[q] * std::sin(th)};
                acc = acc + (w[q] * 2.0 * pi / M) * perp(y - model.phantom);
            }
        }
    }
    out.m = {-acc[0], -acc[1], 0.0};
    return out;
}

Vec3 dipole_far_field(const ImpulseVector& m, const Vec3& x)
{
    double r = norm(x);
    if (r == 0.0)
        throw SingularPointError("dipole far field at the origin");
    if (m.n == 2) {
        Vec2 v = dipole_far_field(m, Vec2{x[0], x[1]});
        return {v[0], v[1], 0.0};
    }
    double mx = dot(m.m, x);
    double r3 = r * r * r, r5 = r3 * r * r;
    Vec3 g = (1.0 / r3) * m.m - (3.0 * mx / r5) * x;
    return (-1.0 / gamma_n(3)) * g;
}

Vec2 dipole_far_field(const ImpulseVector& m, const Vec2& x)
{
    double r2 = norm2(x);
    if (r2 == 0.0)
        throw SingularPointError("dipole far field at the origin");
    Vec2 mm{m.m[0], m.m[1]};
    double mx = dot(mm, x);
    Vec2 g = (1.0 / r2) * mm - (2.0 * mx / (r2 * r2)) * x;
    return (-1.0 / gamma_n(2)) * g;
}

Vec3 net_vorticity_3d(const VorticityModel& model)
{
    if (model.kind != ModelKind::Sampled3D)
        throw PreconditionError("net_vorticity_3d needs a sampled-3d model");
    Vec3 acc{0, 0, 0};
    const auto& s = model.samples;
    for (size_t i = 0; i < s.pos.size(); ++i)
        acc = acc + s.weight[i] * s.omega[i];
    return acc;
}

double moment_norm(const VorticityModel& model, double k)
{
    double acc = 0.0;
    if (model.kind == ModelKind::Sampled3D) {
        const auto& s = model.samples;
        for (size_t i = 0; i < s.pos.size(); ++i)
            acc += s.weight[i] * std::pow(norm(s.pos[i]), k) * norm(s.omega[i]);
        return acc;
    }
    for (const auto& p : model.points)
        acc += std::pow(norm(p.center), k) * std::abs(p.strength);
    std::vector<double> r, w;
    for (const auto& p : model.patches) {
        radial_nodes(p, 0.0, p.radius(), r, w);
        const int M = 128;
        for (int j = 0; j < M; ++j) {
            double th = 2.0 * pi * (j + 0.5) / M;
            for (size_t q = 0; q < r.size(); ++q) {
                Vec2 y{p.center[0] + r[q] * std::cos(th), p.center[1] + r[q] * std::sin(th)};
                acc += std::abs(w[q]) * (2.0 * pi / M) * std::pow(norm(y), k);
            }
        }
    }
    return acc;
}

VorticityModel vortex_ring_model(const Vec3& center, double R, double gamma, int n)
{
    VorticityModel m;
    m.kind = ModelKind::Sampled3D;
    const double ds = 2.0 * pi * R / n;
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * pi * (i + 0.5) / n;
        m.samples.pos.push_back(center + Vec3{R * std::cos(th), R * std::sin(th), 0.0});
        m.samples.omega.push_back({-gamma * std::sin(th), gamma * std::cos(th), 0.0});
        m.samples.weight.push_back(ds);
    }
    return m;
}

VorticityModel curl_lattice_model(const Vec3& center, double s, const Vec3& amp, int m)
{
    // lattice spans +-6 s; the potential is below 1e-15 on its rim
    const double h = 6.0 * s / m;
    const int n = 2 * m + 3;  // one ghost layer each side
    auto idx = [n](int i, int j, int k) { return (static_cast<size_t>(i) * n + j) * n + k; };
    std::vector<double> phi(static_cast<size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double x = (i - m - 1) * h, y = (j - m - 1) * h, z = (k - m - 1) * h;
                phi[idx(i, j, k)] = std::exp(-(x * x + y * y + z * z) / (s * s));
            }
    VorticityModel out;
    out.kind = ModelKind::Sampled3D;
    const double w = h * h * h;
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j)
            for (int k = 1; k < n - 1; ++k) {
                // curl(amp * phi) = grad(phi) x amp
                Vec3 g{(phi[idx(i + 1, j, k)] - phi[idx(i - 1, j, k)]) / (2 * h),
                       (phi[idx(i, j + 1, k)] - phi[idx(i, j - 1, k)]) / (2 * h),
                       (phi[idx(i, j, k + 1)] - phi[idx(i, j, k - 1)]) / (2 * h)};
                Vec3 om = cross(g, amp);
                if (norm(om) == 0.0)
                    continue;
                out.samples.pos.push_back(center + Vec3{(i - m - 1) * h, (j - m - 1) * h, (k - m - 1) * h});
                out.samples.omega.push_back(om);
                out.samples.weight.push_back(w);
            }
    return out;
}

std::string to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::PointSet: return "point-set";
    case ModelKind::RadialPatch: return "radial-patch";
    case ModelKind::Sampled3D: return "sampled-3d";
    }
    return "point-set";
}

ModelKind model_kind_from_string(const std::string& s)
{
    if (s == "point-set")
        return ModelKind::PointSet;
    if (s == "radial-patch")
        return ModelKind::RadialPatch;
    if (s == "sampled-3d")
        return ModelKind::Sampled3D;
    throw PreconditionError("unknown vorticity model kind '" + s + "'");
}

} // namespace cgw
