#include "cgw/diagnostics.hpp"

#include "cgw/chebyshev.hpp"
#include "cgw/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cgw {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Mass of the fitted tail C/X^2 + D/X^4 beyond |X| = L on one side (fit over 0.6 L <= |X| < L).
double side_tail_mass(const std::vector<double>& eta, const PeriodicGrid& g, int side, bool absolute = false)
{
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (int j = 0; j < g.N; ++j) {
        double X = g.x(j);
        if (side * X < 0.6 * g.L)
            continue;
        double q = 1.0 / (X * X), q2 = q * q;
        a11 += q * q;
        a12 += q * q2;
        a22 += q2 * q2;
        b1 += eta[j] * q;
        b2 += eta[j] * q2;
    }
    double det = a11 * a22 - a12 * a12;
    if (!(det > 0.0))
        return 0.0;
    double C = (b1 * a22 - b2 * a12) / det;
    double D = (a11 * b2 - a12 * b1) / det;
    const double L = g.L;
    if (absolute)
        return std::abs(C / L + D / (3.0 * L * L * L));
    return C / L + D / (3.0 * L * L * L);
}

} // namespace

double excess_mass(const std::vector<double>& eta, const PeriodicGrid& g)
{
    double s = std::accumulate(eta.begin(), eta.end(), 0.0) * g.h();
    return s + side_tail_mass(eta, g, +1) + side_tail_mass(eta, g, -1);
}

double excess_mass(const SurfaceProfile& eta) { return excess_mass(eta.eta, eta.grid); }

double abs_mass(const SurfaceProfile& eta)
{
    double s = 0.0;
    for (double v : eta.eta)
        s += std::abs(v);
    s *= eta.grid.h();
    return s + side_tail_mass(eta.eta, eta.grid, +1, true) + side_tail_mass(eta.eta, eta.grid, -1, true);
}

std::vector<double> bernoulli_residual(const WaveState& s)
{
    const auto& g = s.grid();
    StripSampler sampler(s.psi);
    std::vector<double> r(g.N);
    const auto& P = s.params;
    for (int j = 0; j < g.N; ++j) {
        Vec2 x{g.x(j), s.eta.eta[j]};
        Vec2 u = total_velocity(s, sampler, x);
        double ex = s.eta.eta_x[j];
        double q = 1.0 + ex * ex;
        double curv = s.eta.eta_xx[j] / (q * std::sqrt(q));
        r[j] = 0.5 * norm2(u) - s.c1 * u[0] + P.g * s.eta.eta[j] - P.sigma * curv;
    }
    return r;
}

std::vector<double> kinematic_residual(const WaveState& s)
{
    const auto& g = s.grid();
    StripSampler sampler(s.psi);
    std::vector<double> r(g.N);
    for (int j = 0; j < g.N; ++j) {
        Vec2 x{g.x(j), s.eta.eta[j]};
        Vec2 u = total_velocity(s, sampler, x);
        double ex = s.eta.eta_x[j];
        r[j] = std::abs((-(u[0] - s.c1) * ex + u[1]) / std::sqrt(1.0 + ex * ex));
    }
    return r;
}

std::vector<double> surface_speed(const WaveState& s)
{
    const auto& g = s.grid();
    StripSampler sampler(s.psi);
    std::vector<double> r(g.N);
    for (int j = 0; j < g.N; ++j)
        r[j] = norm(total_velocity(s, sampler, {g.x(j), s.eta.eta[j]}));
    return r;
}

TailFit tail_fit(const std::vector<double>& R, const std::vector<double>& v)
{
    if (R.size() < 8 || R.size() != v.size())
        throw PreconditionError("tail_fit needs at least 8 (R, value) samples");
    TailFit f;
    f.samples = static_cast<int>(R.size());
    f.R1 = *std::min_element(R.begin(), R.end());
    f.R2 = *std::max_element(R.begin(), R.end());
    if (!(f.R1 > 0.0))
        throw PreconditionError("tail_fit needs positive radii");
    int pos = 0, neg = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < R.size(); ++i) {
        if (v[i] > 0)
            ++pos;
        else if (v[i] < 0)
            ++neg;
        if (v[i] == 0.0)
            continue;
        double x = std::log(R[i]), y = std::log(std::abs(v[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    f.sign_flip = pos > 0 && neg > 0;
    if (n < 2)
        throw PreconditionError("tail_fit: all samples vanish");
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    f.exponent = -slope;
    f.coefficient = std::exp(icpt) * (neg > pos ? -1.0 : 1.0);
    double rr = 0.0;
    for (size_t i = 0; i < R.size(); ++i) {
        if (v[i] == 0.0)
            continue;
        double e = std::log(std::abs(v[i])) - (icpt + slope * std::log(R[i]));
        rr += e * e;
    }
    f.residual = std::sqrt(rr / n);
    return f;
}

TailFit tail_fit_fixed(const std::vector<double>& R, const std::vector<double>& v, double p)
{
    if (R.size() < 8 || R.size() != v.size())
        throw PreconditionError("tail_fit needs at least 8 (R, value) samples");
    TailFit f;
    f.samples = static_cast<int>(R.size());
    f.R1 = *std::min_element(R.begin(), R.end());
    f.R2 = *std::max_element(R.begin(), R.end());
    f.exponent = p;
    double num = 0.0, den = 0.0;
    int pos = 0, neg = 0;
    for (size_t i = 0; i < R.size(); ++i) {
        double q = std::pow(R[i], -p);
        num += v[i] * q;
        den += q * q;
        pos += v[i] > 0;
        neg += v[i] < 0;
    }
    f.sign_flip = pos > 0 && neg > 0;
    f.coefficient = num / den;
    double rr = 0.0;
    for (size_t i = 0; i < R.size(); ++i) {
        double m = f.coefficient * std::pow(R[i], -p);
        double e = (v[i] - m) / (std::abs(m) + 1e-300);
        rr += e * e;
    }
    f.residual = std::sqrt(rr / R.size());
    return f;
}

void surface_window(const PeriodicGrid& g, const std::vector<double>& f, double R1, double R2,
                    std::vector<double>& R, std::vector<double>& v)
{
    R.clear();
    v.clear();
    for (int j = 0; j < g.N; ++j) {
        double X = g.x(j);
        if (X >= R1 && X <= R2) {
            R.push_back(X);
            v.push_back(f[j]);
        }
    }
}

double dipole_from_tail(const WaveState& s, std::optional<TailWindow> w, TailFit* fit)
{
    if (s.c1 == 0.0)
        throw UndefinedDipoleError("dipole from the tail needs c1 != 0");
    TailWindow win = w.value_or(TailWindow::defaults(s.grid()));
    std::vector<double> R, v;
    surface_window(s.grid(), s.eta.eta, win.R1, win.R2, R, v);
    TailFit f = tail_fit_fixed(R, v, 2.0);
    if (fit)
        *fit = f;
    return -s.params.g * f.coefficient / s.c1;
}

namespace {

// Phi = m.x / (2 pi |x|^2)
double Phi(const Vec2& m, const Vec2& x) { return dot(m, x) / (2.0 * pi * norm2(x)); }

} // namespace

double dipole_from_identity(const WaveState& s, IdentityTerms* terms)
{
    IdentityTerms T;
    if (s.varpi == 0.0 && s.model.total_strength() == 0.0) {
        if (terms)
            *terms = T;
        return 0.0;
    }
    if (s.c1 == 0.0)
        throw UndefinedDipoleError("dipole identity needs c1 != 0");
    const auto& g = s.grid();
    const double c1 = s.c1;
    RowMat py = s.psi.dY(1), px = s.psi.dX(1);
    for (int j = 0; j < g.N; ++j) {
        double ex = s.eta.eta_x[j];
        double flux = py(0, j) * (1.0 + ex * ex) - ex * px(0, j);
        double psiV = stream_function_2d(s.model, {g.x(j), s.eta.eta[j]});
        T.surface_UU += s.psi.v(0, j) * flux;
        T.surface_UV += psiV * flux;
        T.surface_cV += psiV;
    }
    T.surface_UU *= g.h();
    T.surface_UV *= g.h();
    T.surface_cV *= -c1 * g.h();

    auto imp = vortex_impulse(s.model);
    Vec2 m{imp.m[0], imp.m[1]};
    const double L = g.L;
    const double etaL = s.eta.eta[0];
    // flux of Phi (u - c) through the sides, U neglected at |x1| = L
    auto side = [&](double x1) {
        auto f = [&](double t) {
            if (t >= 1.0)
                return 0.0;
            double x2 = etaL - L * t / (1.0 - t);
            double jac = L / ((1.0 - t) * (1.0 - t));
            Vec2 x{x1, x2};
            double u1 = biot_savart_2d(s.model, x)[0];
            return Phi(m, x) * (u1 - c1) * jac;
        };
        return gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 10, 1e-11);
    };
    T.sides = -(side(L) - side(-L));

    // |x1| > L, x2 < 0: c1 W1 - V.grad(Phi), W = V + grad(Phi)
    auto ext = [&](double sgn) {
        auto outer = [&](double tau) {
            if (tau <= 0.0)
                return 0.0;
            double x1 = sgn * L / tau;
            double jx = L / (tau * tau);
            auto inner = [&](double t) {
                if (t >= 1.0)
                    return 0.0;
                double x2 = -L * t / (1.0 - t);
                double jy = L / ((1.0 - t) * (1.0 - t));
                Vec2 x{x1, x2};
                Vec2 V = biot_savart_2d(s.model, x);
                Vec2 d = dipole_far_field(imp, x);  // = -grad(Phi)
                Vec2 W = V - d;
                return (c1 * W[0] + dot(V, d)) * jy;
            };
            return jx * gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 5, 1e-8);
        };
        return gauss_kronrod<double, 31>::integrate(outer, 0.0, 1.0, 5, 1e-8);
    };
    T.exterior = ext(+1.0) + ext(-1.0);

    T.integral = T.surface_UU + T.surface_UV + T.surface_cV + T.sides + T.exterior;
    T.p1 = -(2.0 / gamma_n(2)) * T.integral / c1;
    if (terms)
        *terms = T;
    return T.p1;
}

// ---------------------------------------------------------------------------
// Angular momentum

namespace {

// theta range of {r (cos t, sin t) below the surface}; empty when lo >= hi.
std::pair<double, double> theta_range(const std::function<double(double)>& surf, double r)
{
    auto gfun = [&](double th) { return r * std::sin(th) - surf(r * std::cos(th)); };
    const double mid = 1.5 * pi;
    if (gfun(mid) >= 0.0)
        return {mid, mid};
    auto root = [&](double a, double b) {
        // g(a) > 0 > g(b) or reversed; plain bisection
        double ga = gfun(a);
        for (int it = 0; it < 80; ++it) {
            double c = 0.5 * (a + b);
            double gc = gfun(c);
            if ((gc > 0) == (ga > 0)) {
                a = c;
                ga = gc;
            } else {
                b = c;
            }
        }
        return 0.5 * (a + b);
    };
    double lo = gfun(0.5 * pi) > 0.0 ? root(0.5 * pi, mid) : 0.5 * pi;
    double hi = gfun(2.5 * pi) > 0.0 ? root(mid, 2.5 * pi) : 2.5 * pi;
    return {lo, hi};
}

} // namespace

AngularMomentum angular_momentum_profile(const AngularProblem& prob, const std::vector<double>& Rin,
                                         double fit_from)
{
    AngularMomentum out;
    std::vector<double> R = Rin;
    std::sort(R.begin(), R.end());
    if (R.empty())
        return out;
    const double rho0 = 0.15;
    double rmin = 0.0;
    std::vector<double> edges{0.0};
    for (const auto& p : prob.singular) {
        double rs = norm(p.center);
        rmin = std::max(rmin, rs + 6.0 * rho0);
        for (double f : {0.5, 0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.2, 1.5})
            edges.push_back(rs * f);
    }
    if (R.front() < rmin)
        throw PreconditionError(fmt::format("angular momentum radii must be >= {:g}", rmin));
    for (double r : R)
        edges.push_back(r);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());

    auto integrand = [&](const Vec2& x) {
        Vec2 u = prob.u(x);
        double f = dot(perp(x), u);
        for (const auto& p : prob.singular) {
            Vec2 d = x - p.center;
            double d2 = norm2(d);
            f -= p.strength / (2.0 * pi) * dot(p.center, d) / d2 * std::exp(-d2 / (rho0 * rho0));
        }
        return f;
    };

    std::vector<double> gr, gwr, gt, gwt;
    gauss_legendre(8, 0.0, 1.0, gt, gwt);
    const int panels = 48;
    double acc = 0.0;
    size_t next = 0;
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
        double a = edges[e], b = edges[e + 1];
        int sub = std::max(1, static_cast<int>(std::ceil((b - a) / std::max(2.0, 0.05 * b))));
        for (int q = 0; q < sub; ++q) {
            double ra = a + (b - a) * q / sub, rb = a + (b - a) * (q + 1) / sub;
            gauss_legendre(8, ra, rb, gr, gwr);
            for (size_t ir = 0; ir < gr.size(); ++ir) {
                double r = gr[ir];
                auto [lo, hi] = theta_range(prob.surface, r);
                if (!(hi > lo))
                    continue;
                double ring = 0.0;
                double pw = (hi - lo) / panels;
                for (int pnl = 0; pnl < panels; ++pnl)
                    for (size_t it = 0; it < gt.size(); ++it) {
                        double th = lo + pw * (pnl + gt[it]);
                        Vec2 x{r * std::cos(th), r * std::sin(th)};
                        ring += gwt[it] * pw * integrand(x);
                    }
                acc += gwr[ir] * r * ring;
            }
        }
        while (next < R.size() && std::abs(R[next] - b) < 1e-12) {
            out.R.push_back(R[next]);
            out.I.push_back(acc);
            ++next;
        }
    }
    // linear fit over the fit window
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < out.R.size(); ++i) {
        if (out.R[i] < fit_from)
            continue;
        sx += out.R[i];
        sy += out.I[i];
        sxx += out.R[i] * out.R[i];
        sxy += out.R[i] * out.I[i];
        ++n;
        if (n == 1)
            out.fit_R1 = out.R[i];
        out.fit_R2 = out.R[i];
    }
    if (n >= 2)
        out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

AngularMomentum angular_momentum_growth(const WaveState& s, const std::vector<double>& R,
                                        double fit_from)
{
    auto sampler = std::make_shared<StripSampler>(s.psi);
    AngularProblem prob;
    prob.u = [&s, sampler](const Vec2& x) { return total_velocity(s, *sampler, x); };
    prob.surface = [&s](double x1) { return s.eta.eta_at(x1); };
    prob.singular = s.model.points;
    return angular_momentum_profile(prob, R, fit_from);
}

// ---------------------------------------------------------------------------
// Far field

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0) || !(x[i] > 0.0))
            continue;
        double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
        ++n;
    }
    if (n < 2)
        return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> geometric_radii(double r1, double r2, int n)
{
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i)
        r[i] = r1 * std::pow(r2 / r1, n > 1 ? double(i) / (n - 1) : 0.0);
    return r;
}

FarFieldReport far_field_report(const VorticityModel& model, const WaveState* state,
                                const std::vector<double>& radii, std::optional<Vec3> direction)
{
    FarFieldReport rep;
    rep.m = vortex_impulse(model);
    const int n = model.dim();
    Vec3 d = direction.value_or(n == 3 ? Vec3{0.3, -0.5, 0.81} : Vec3{std::cos(-0.7), std::sin(-0.7), 0.0});
    d = (1.0 / norm(d)) * d;
    std::vector<double> rs, err, sp;
    for (double r : radii) {
        FarFieldRow row;
        row.r = r;
        if (n == 3) {
            Vec3 x = r * d;
            Vec3 v = biot_savart_3d(model, x).v;
            Vec3 dp = dipole_far_field(rep.m, x);
            row.error = norm(v - dp);
            row.speed = norm(v);
        } else {
            Vec2 x{r * d[0], r * d[1]};
            Vec2 v = biot_savart_2d(model, x);
            Vec2 dp = dipole_far_field(rep.m, x);
            row.error = norm(v - dp);
            row.speed = norm(v);
        }
        rep.rows.push_back(row);
        rs.push_back(r);
        err.push_back(row.error);
        sp.push_back(row.speed);
    }
    rep.error_slope = loglog_slope(rs, err);
    rep.speed_slope = loglog_slope(rs, sp);
    if (n == 2) {
        rep.expected_surface_limit = -rep.m.m[1] / gamma_n(2);
        for (double r : radii) {
            double e = 0.0, ex = 0.0;
            if (state && r < state->grid().L) {
                e = state->eta.eta_at(r);
                ex = state->eta.eta_x_at(r);
            }
            Vec2 v = biot_savart_2d(model, {r, e});
            double nv = (-ex * v[0] + v[1]) / std::sqrt(1.0 + ex * ex);
            rep.surface.push_back({r, r * r * nv});
        }
        if (!rep.surface.empty())
            rep.surface_limit = rep.surface.back().scaled;
    }
    return rep;
}

// ---------------------------------------------------------------------------

DipoleReport dipole_report(const WaveState& s, const ReportOptions& opt)
{
    DipoleReport rep;
    const auto& g = s.grid();
    rep.m = vortex_impulse(s.model);
    rep.excess_mass = excess_mass(s.eta);
    rep.abs_mass = abs_mass(s.eta);
    auto br = bernoulli_residual(s);
    for (double v : br)
        rep.bernoulli_sup = std::max(rep.bernoulli_sup, std::abs(v));
    auto kr = kinematic_residual(s);
    for (double v : kr)
        rep.kinematic_sup = std::max(rep.kinematic_sup, v);
    if (s.varpi == 0.0)
        return rep;
    TailWindow tw = opt.tail_window.value_or(TailWindow::defaults(g));
    TailWindow ew = opt.exponent_window.value_or(tw);
    rep.p_identity = dipole_from_identity(s, &rep.identity);
    rep.p_tail = dipole_from_tail(s, tw, &rep.eta_tail_pinned);
    std::vector<double> R, v;
    surface_window(g, s.eta.eta, ew.R1, ew.R2, R, v);
    rep.eta_tail = tail_fit(R, v);
    if (rep.eta_tail.sign_flip)
        rep.warnings.push_back("eta changes sign inside the tail window");
    auto speed = surface_speed(s);
    surface_window(g, speed, ew.R1, ew.R2, R, v);
    rep.speed_tail = tail_fit(R, v);

    double mn = 0.0, mx = 0.0;
    for (double e : s.eta.eta) {
        mn = std::min(mn, e);
        mx = std::max(mx, e);
    }
    rep.eta_sign_change = mn < 0.0 && mx > 0.0;
    surface_window(g, s.eta.eta, tw.R1, tw.R2, R, v);
    rep.eta_positive_outer = !v.empty() && std::all_of(v.begin(), v.end(), [](double e) { return e > 0.0; });

    if (opt.angular && !s.model.patches.size()) {
        std::vector<double> Rs{2.0};
        const int nr = 15;
        for (int i = 1; i <= nr; ++i)
            if (0.75 * g.L * i / nr > 2.0)
                Rs.push_back(0.75 * g.L * i / nr);
        rep.angular = angular_momentum_growth(s, Rs, std::max(20.0, 0.05 * g.L));
        rep.angular_slope = rep.angular.slope;
    }
    return rep;
}

} // namespace cgw
