#include "cgw/surface.hpp"

#include "cgw/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace cgw {

double Cutoff::operator()(double Y) const
{
    if (std::abs(Y) >= 1.0)
        return 0.0;
    double s = 1.0 - Y * Y;
    return s * s * s;
}

double Cutoff::d1(double Y) const
{
    if (std::abs(Y) >= 1.0)
        return 0.0;
    double s = 1.0 - Y * Y;
    return -6.0 * Y * s * s;
}

double Cutoff::d2(double Y) const
{
    if (std::abs(Y) >= 1.0)
        return 0.0;
    double s = 1.0 - Y * Y;
    return -6.0 * s * s + 24.0 * Y * Y * s;
}

double Cutoff::max_abs_d1() const
{
    // extremum of 6 Y (1 - Y^2)^2 at Y^2 = 1/5
    double Y = std::sqrt(0.2);
    return std::abs(d1(Y));
}

SurfaceProfile SurfaceProfile::from_samples(const Spectral1D& fft, std::vector<double> eta)
{
    SurfaceProfile s;
    s.grid = fft.grid();
    if (static_cast<int>(eta.size()) != s.grid.N)
        throw PreconditionError("surface samples do not match the grid");
    s.eta_x = fft.derivative(eta, 1);
    s.eta_xx = fft.derivative(eta, 2);
    s.eta = std::move(eta);
    return s;
}

SurfaceProfile SurfaceProfile::flat(const PeriodicGrid& g)
{
    SurfaceProfile s;
    s.grid = g;
    s.eta.assign(g.N, 0.0);
    s.eta_x.assign(g.N, 0.0);
    s.eta_xx.assign(g.N, 0.0);
    return s;
}

double SurfaceProfile::eta_at(double X) const { return local_interp(eta, grid, X); }
double SurfaceProfile::eta_x_at(double X) const { return local_interp(eta_x, grid, X); }

double flatten_coords(double eta, const Cutoff& a, double Y)
{
    if (Y > 0.0)
        throw PreconditionError("flatten_coords needs Y <= 0");
    double J = 1.0 + eta * a.d1(Y);
    if (!(J > 0.0))
        throw MappingError(fmt::format("flattening Jacobian {:g} at Y = {:g}", J, Y));
    return Y + eta * a(Y);
}

double flatten_coords(const SurfaceProfile& eta, const Cutoff& a, int jx, double Y)
{
    return flatten_coords(eta.eta[jx], a, Y);
}

double unflatten(double eta, const Cutoff& a, double x2)
{
    if (x2 <= -1.0)
        return x2;
    if (x2 > eta + 1e-15)
        throw PreconditionError(fmt::format("point x2 = {:g} lies above the surface {:g}", x2, eta));
    double lo = -1.0, hi = 0.0;
    double Y = std::clamp(x2 - eta, lo, hi);
    for (int it = 0; it < 60; ++it) {
        double r = Y + eta * a(Y) - x2;
        double J = 1.0 + eta * a.d1(Y);
        if (!(J > 0.0))
            throw MappingError("flattening map degenerates");
        if (r > 0.0)
            hi = Y;
        else
            lo = Y;
        double Yn = Y - r / J;
        if (!(Yn > lo && Yn < hi))
            Yn = 0.5 * (lo + hi);
        if (std::abs(Yn - Y) < 1e-16)
            return Yn;
        Y = Yn;
    }
    return Y;
}

double f1_point(const PsiJet& p, const EtaJet& h, double a, double aY, double aYY)
{
    const double e = h.e, eX = h.ex, eXX = h.exx;
    const double lin = aY * e * p.yy - a * eXX * p.y - aYY * e * p.y + 3.0 * aY * e * p.xx
                       - 2.0 * a * eX * p.xy;
    const double quad = a * a * eX * eX * p.yy - 2.0 * a * aY * e * eXX * p.y
                        + 2.0 * a * aY * eX * eX * p.y + 3.0 * aY * aY * e * e * p.xx
                        - 4.0 * a * aY * e * eX * p.xy;
    const double cub = a * a * aY * eX * eX * p.yy - a * aY * aY * e * eXX * p.y
                       - a * a * aYY * eX * eX * p.y + 2.0 * a * aY * aY * eX * eX * p.y
                       + aY * aY * aY * e * e * p.xx - 2.0 * a * aY * aY * e * eX * p.xy;
    return -lin - quad - e * cub;
}

double f2_point(double psi_x, double psi_y, const EtaJet& h, const Vec2& V, double sigma)
{
    double u1 = V[0] - psi_y;
    double u2 = V[1] + psi_x - h.ex * psi_y;
    double s = 1.0 + h.ex * h.ex;
    return -0.5 * (u1 * u1 + u2 * u2) + sigma * (1.0 / (s * std::sqrt(s)) - 1.0) * h.exx;
}

RowMat assemble_f1(const StripField& psi, const SurfaceProfile& eta, const Cutoff& a)
{
    const auto& cy = psi.ctx->cheb().y;
    const int n = psi.ctx->ny();
    const int N = psi.ctx->xgrid().N;
    RowMat py = psi.dY(1), pyy = psi.dY(2), pxx = psi.dX(2);
    RowMat pxy = psi.dXY();
    RowMat out = RowMat::Zero(n + 1, N);
    for (int i = 0; i <= n; ++i) {
        double Y = cy[i];
        double av = a(Y), a1 = a.d1(Y), a2 = a.d2(Y);
        if (av == 0.0 && a1 == 0.0 && a2 == 0.0)
            continue;
        for (int j = 0; j < N; ++j)
            out(i, j) = f1_point({py(i, j), pxx(i, j), pxy(i, j), pyy(i, j)},
                                 {eta.eta[j], eta.eta_x[j], eta.eta_xx[j]}, av, a1, a2);
    }
    return out;
}

HalfPlaneField assemble_f1(const HalfPlaneField& psi, const SurfaceProfile& eta, const Cutoff& a)
{
    HalfPlaneField py = psi.dy(1), pyy = psi.dy(2), pxx = psi.dx(2), pxy = psi.dx(1).dy(1);
    HalfPlaneField out(psi.xgrid(), psi.ys());
    const auto& ys = psi.ys();
    for (size_t i = 0; i < ys.size(); ++i) {
        double Y = ys[i];
        double av = a(Y), a1 = a.d1(Y), a2 = a.d2(Y);
        if (av == 0.0 && a1 == 0.0 && a2 == 0.0)
            continue;
        for (int j = 0; j < psi.xgrid().N; ++j)
            out.at(i, j) = f1_point({py.at(i, j), pxx.at(i, j), pxy.at(i, j), pyy.at(i, j)},
                                    {eta.eta[j], eta.eta_x[j], eta.eta_xx[j]}, av, a1, a2);
    }
    return out;
}

std::vector<Vec2> surface_velocity_V(const VorticityModel& model, const SurfaceProfile& eta)
{
    const auto& g = eta.grid;
    std::vector<Vec2> V(g.N, Vec2{0.0, 0.0});
    if (model.empty())
        return V;
    for (int j = 0; j < g.N; ++j)
        V[j] = biot_savart_2d(model, {g.x(j), eta.eta[j]});
    return V;
}

std::vector<double> assemble_f2(const StripField& psi, const SurfaceProfile& eta,
                                const VorticityModel& model, double sigma)
{
    const int N = psi.ctx->xgrid().N;
    RowMat py = psi.dY(1);
    RowMat px = psi.dX(1);
    auto V = surface_velocity_V(model, eta);
    std::vector<double> out(N);
    for (int j = 0; j < N; ++j)
        out[j] = f2_point(px(0, j), py(0, j), {eta.eta[j], eta.eta_x[j], eta.eta_xx[j]}, V[j], sigma);
    return out;
}

std::vector<double> kinematic_data(const SurfaceProfile& eta, const VorticityModel& model, double c1)
{
    const auto& g = eta.grid;
    std::vector<double> d(g.N);
    for (int j = 0; j < g.N; ++j) {
        double psiV = model.empty() ? 0.0 : stream_function_2d(model, {g.x(j), eta.eta[j]});
        d[j] = -(c1 * eta.eta[j] + psiV);
    }
    return d;
}

double weighted_sup_strip(const RowMat& F, const StripSolver& s)
{
    double m = 0.0;
    const auto& g = s.xgrid();
    for (int i = 0; i < F.rows(); ++i)
        for (int j = 0; j < F.cols(); ++j)
            m = std::max(m, weight(g.x(j), s.cheb().y[i]) * std::abs(F(i, j)));
    return m;
}

double weighted_sup_surface(const std::vector<double>& f, const PeriodicGrid& g)
{
    double m = 0.0;
    for (int j = 0; j < g.N; ++j)
        m = std::max(m, weight(g.x(j), 0.0) * std::abs(f[j]));
    return m;
}

Residual residual_F(const StripField& psi, const SurfaceProfile& eta, const VorticityModel& model,
                    double c1, const PhysicalParams& P)
{
    const StripSolver& S = *psi.ctx;
    Residual r;
    RowMat f1 = assemble_f1(psi, eta, P.a);
    StripField K = S.solve(f1, kinematic_data(eta, model, c1));
    r.F1 = psi.v - K.v;

    const int N = S.xgrid().N;
    RowMat py = psi.dY(1);
    RowMat px = psi.dX(1);
    auto V = surface_velocity_V(model, eta);
    r.F2.resize(N);
    for (int j = 0; j < N; ++j) {
        EtaJet e{eta.eta[j], eta.eta_x[j], eta.eta_xx[j]};
        double f2 = f2_point(px(0, j), py(0, j), e, V[j], P.sigma);
        double u1 = V[j][0] - py(0, j);
        r.F2[j] = P.g * e.e - P.sigma * e.exx - c1 * u1 - f2;
    }
    r.F1_norm = weighted_sup_strip(r.F1, S);
    r.F2_norm = weighted_sup_surface(r.F2, S.xgrid());
    return r;
}

Linearized linearize_trivial(const StripField& dpsi, const std::vector<double>& deta,
                             const Spectral1D& fft, const PhysicalParams& P)
{
    Linearized L;
    L.dpsi = dpsi;
    auto dxx = fft.derivative(deta, 2);
    L.deta.resize(deta.size());
    for (size_t j = 0; j < deta.size(); ++j)
        L.deta[j] = P.g * deta[j] - P.sigma * dxx[j];
    return L;
}

std::vector<double> apply_surface_kernel(const std::vector<double>& rhs, const Spectral1D& fft,
                                         const PhysicalParams& P, double c, SurfaceKernel kind)
{
    const double g = P.g, s = P.sigma, ac = std::abs(c);
    if (kind != SurfaceKernel::G2 && !(s > ac * ac / (4.0 * g)))
        throw StrongTensionError(fmt::format(
            "sigma = {:g} <= c^2/4g = {:g}: the G multiplier is not positive", s, ac * ac / (4.0 * g)));
    if (kind == SurfaceKernel::G2 && !(g > 0.0 && s >= 0.0))
        throw PreconditionError("G2 needs g > 0 and sigma >= 0");
    return fft.multiplier(rhs, [&](double k) {
        double g2 = 1.0 / (s * k * k + g);
        if (kind == SurfaceKernel::G2)
            return g2;
        double G = 1.0 / (s * k * k - ac * std::abs(k) + g);
        return kind == SurfaceKernel::G ? G : G - g2;
    });
}

} // namespace cgw
