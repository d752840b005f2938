#include "cgw/solver.hpp"

#include "cgw/diagnostics.hpp"
#include "cgw/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace cgw {

SolverContext SolverContext::make(const SolverSettings& s)
{
    if (s.grid.N <= 0 || (s.grid.N & (s.grid.N - 1)) != 0)
        throw PreconditionError("N_X must be a power of two");
    SolverContext c;
    c.strip = std::make_shared<StripSolver>(s.grid, s.ny);
    c.fft = std::make_shared<Spectral1D>(s.grid);
    return c;
}

VorticityModel model_at_strength(const VorticityModel& base, double varpi)
{
    if (base.kind == ModelKind::Sampled3D)
        throw UnsupportedError("the wave solver needs a planar vorticity model");
    if (base.empty())
        return VorticityModel::point({0.0, -1.0}, varpi, base.phantom);
    VorticityModel m = base;
    double tot = base.total_strength();
    if (m.patches.empty() && m.points.size() == 1) {
        m.points[0].strength = varpi;
        return m;
    }
    if (tot == 0.0)
        throw PreconditionError("cannot rescale a vorticity model with zero total strength");
    double s = varpi / tot;
    for (auto& p : m.points)
        p.strength *= s;
    for (auto& p : m.patches)
        for (auto& v : p.value)
            v *= s;
    return m;
}

WaveState trivial_state(const SolverContext& ctx, const PhysicalParams& params,
                        const SolverSettings& settings)
{
    WaveState s;
    s.strip = ctx.strip;
    s.fft = ctx.fft;
    s.eta = SurfaceProfile::flat(ctx.strip->xgrid());
    s.psi = ctx.strip->zero();
    s.params = params;
    s.settings = settings;
    s.model = VorticityModel::point({0.0, -1.0}, 0.0);
    s.converged = true;
    return s;
}

Vec2 irrotational_velocity(const WaveState& s, const StripSampler& sampler, const Vec2& x)
{
    const Cutoff& a = s.params.a;
    double e = s.eta.eta_at(x[0]);
    double ex = s.eta.eta_x_at(x[0]);
    double Y = unflatten(e, a, std::min(x[1], e));
    auto jet = sampler.eval(x[0], Y);
    double J = 1.0 + e * a.d1(Y);
    return {-jet.y / J, jet.x - ex * a(Y) * jet.y / J};
}

Vec2 total_velocity(const WaveState& s, const StripSampler& sampler, const Vec2& x)
{
    Vec2 u = irrotational_velocity(s, sampler, x);
    if (!s.model.empty())
        u = u + biot_savart_2d(s.model, x);
    return u;
}

namespace {

Vec2 advected_point(const VorticityModel& m)
{
    if (!m.points.empty())
        return m.points[0].center;
    if (!m.patches.empty())
        return m.patches[0].center;
    return {0.0, -1.0};
}

Vec2 regular_velocity(const WaveState& s, const StripSampler& sampler)
{
    Vec2 xi = advected_point(s.model);
    Vec2 u = irrotational_velocity(s, sampler, xi);
    if (s.model.empty())
        return u;
    int skip = s.model.points.empty() ? -1 : 0;
    return u + biot_savart_2d_excluding(s.model, xi, skip);
}

} // namespace

double advection_speed(const WaveState& s)
{
    StripSampler sampler(s.psi);
    return regular_velocity(s, sampler)[0];
}

Vec2 advection_residual(const WaveState& s)
{
    if (s.model.points.empty() && !s.model.patches.empty())
        throw UnsupportedError("advection residual is defined for point vortices only");
    StripSampler sampler(s.psi);
    Vec2 u = regular_velocity(s, sampler);
    return {s.c1 - u[0], 0.0 - u[1]};
}

namespace {

void symmetrize_columns(RowMat& v)
{
    const int N = static_cast<int>(v.cols());
    for (int j = 1; j < N / 2; ++j) {
        auto a = 0.5 * (v.col(j) + v.col(N - j));
        v.col(j) = a;
        v.col(N - j) = a;
    }
}

} // namespace

WaveState solve_wave(double varpi, const PhysicalParams& P, const VorticityModel& base,
                     const SolverSettings& S, const WaveState* init, const SolveOptions& opts,
                     const SolverContext* ctx_in)
{
    if (!(P.sigma > 0.0))
        throw PreconditionError("the solver needs sigma > 0");
    if (!(P.g > 0.0))
        throw PreconditionError("the solver needs g > 0");
    if (std::abs(varpi) > S.varpi_max)
        throw PreconditionError(fmt::format("|varpi| = {:g} exceeds varpi_max = {:g}", std::abs(varpi), S.varpi_max));

    SolverContext ctx = ctx_in ? *ctx_in : (init ? SolverContext{init->strip, init->fft} : SolverContext::make(S));
    WaveState s = trivial_state(ctx, P, S);
    s.varpi = varpi;
    if (varpi == 0.0)
        return s;
    s.model = model_at_strength(base, varpi);
    s.model.validate();
    s.dynamically_consistent = s.model.patches.empty();

    const StripSolver& strip = *ctx.strip;
    const Spectral1D& fft = *ctx.fft;
    const int N = S.grid.N;

    std::vector<double> eta(N, 0.0);
    s.c1 = opts.fixed_c1 ? *opts.fixed_c1 : -varpi / (4.0 * pi);
    if (init && init->varpi != 0.0 && init->grid().N == N && init->grid().L == S.grid.L) {
        double r = varpi / init->varpi;
        eta = init->eta.eta;
        for (auto& v : eta)
            v *= r * r;
        s.psi = init->psi;
        s.psi.v *= r * r * r;
        if (!opts.fixed_c1)
            s.c1 = init->c1 * r;
    }
    s.eta = SurfaceProfile::from_samples(fft, eta);

    const double amax = P.a.max_abs_d1();
    double prev_res = 0.0;
    for (int it = 1; it <= S.max_outer; ++it) {
        double emax = 0.0;
        for (double v : s.eta.eta)
            emax = std::max(emax, std::abs(v));
        if (!(emax * amax < 1.0))
            throw MappingError(fmt::format("|eta|_inf |a'|_inf = {:g} >= 1", emax * amax));

        RowMat f1 = assemble_f1(s.psi, s.eta, P.a);
        StripField psiK = strip.solve(f1, kinematic_data(s.eta, s.model, s.c1));
        symmetrize_columns(psiK.v);
        RowMat dpsi = s.psi.v - psiK.v;
        s.F1_norm = weighted_sup_strip(dpsi, strip);
        double step = dpsi.cwiseAbs().maxCoeff();

        StripSampler sampler(s.psi);
        double cadv = regular_velocity(s, sampler)[0];
        s.advection_norm = opts.fixed_c1 ? 0.0 : std::abs(s.c1 - cadv);

        Residual r = residual_F(s.psi, s.eta, s.model, s.c1, P);
        s.F2_norm = r.F2_norm;
        s.log.push_back({it, s.F1_norm, s.F2_norm, s.advection_norm, s.c1, emax, step});
        s.iterations = it;
        // contraction of the coupled fixed-point map, from successive residuals
        double res = s.F1_norm + s.F2_norm + s.advection_norm;
        if (prev_res > 0.0)
            s.picard_contraction = std::max(s.picard_contraction, res / prev_res);
        prev_res = res;

        if (s.F1_norm < S.tol && s.F2_norm < S.tol && s.advection_norm < S.tol) {
            s.converged = true;
            return s;
        }

        // Picard on psi, advection update of c1, then the G2-preconditioned step on eta.
        s.psi = psiK;
        if (!opts.fixed_c1) {
            StripSampler sp(s.psi);
            s.c1 = regular_velocity(s, sp)[0];
        }
        if (!(P.sigma > s.c1 * s.c1 / (4.0 * P.g)))
            throw StrongTensionError(fmt::format("sigma <= c1^2/4g at iterate {} (c1 = {:g})", it, s.c1));
        Residual r2 = residual_F(s.psi, s.eta, s.model, s.c1, P);
        auto corr = apply_surface_kernel(r2.F2, fft, P, s.c1, SurfaceKernel::G2);
        auto e = s.eta.eta;
        for (int j = 0; j < N; ++j)
            e[j] -= corr[j];
        symmetrize_even(e);
        s.eta = SurfaceProfile::from_samples(fft, std::move(e));
    }
    throw ConvergenceError(fmt::format(
        "no convergence in {} iterations at varpi = {:g} (F1 {:.3g}, F2 {:.3g}, advection {:.3g})",
        S.max_outer, varpi, s.F1_norm, s.F2_norm, s.advection_norm));
}

ContinuationRecord continuation_sweep(const std::vector<double>& varpis, const PhysicalParams& P,
                                      const VorticityModel& model, const SolverSettings& S)
{
    ContinuationRecord rec;
    if (varpis.empty())
        return rec;
    for (size_t i = 1; i < varpis.size(); ++i)
        if (!(varpis[i] > varpis[i - 1]))
            throw PreconditionError("continuation grid must increase strictly");
    SolverContext ctx = SolverContext::make(S);
    std::shared_ptr<WaveState> prev;
    for (double w : varpis) {
        std::shared_ptr<WaveState> got;
        std::string why;
        // step halving: retry through intermediate strengths
        double from = prev ? prev->varpi : 0.0;
        std::vector<double> path{w};
        for (int h = 0; h <= S.max_halvings && !got; ++h) {
            try {
                std::shared_ptr<WaveState> cur = prev;
                for (double v : path) {
                    auto st = solve_wave(v, P, model, S, cur.get(), {}, &ctx);
                    cur = std::make_shared<WaveState>(std::move(st));
                }
                got = cur;
            } catch (const Error& e) {
                why = e.what();
                std::vector<double> finer;
                double a = from;
                for (double v : path) {
                    finer.push_back(0.5 * (a + v));
                    finer.push_back(v);
                    a = v;
                }
                path = finer;
            }
        }
        if (!got) {
            rec.truncated = true;
            rec.reason = fmt::format("varpi = {:g}: {}", w, why);
            break;
        }
        ContinuationEntry e;
        e.varpi = w;
        e.c1 = got->c1;
        e.eta_max = 0.0;
        for (double v : got->eta.eta)
            e.eta_max = std::max(e.eta_max, std::abs(v));
        e.excess_mass = excess_mass(got->eta);
        e.abs_mass = abs_mass(got->eta);
        e.F1 = got->F1_norm;
        e.F2 = got->F2_norm;
        e.advection = got->advection_norm;
        e.iterations = got->iterations;
        e.picard_contraction = got->picard_contraction;
        e.state = got;
        rec.entries.push_back(e);
        prev = got;
    }
    return rec;
}

} // namespace cgw
