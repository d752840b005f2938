#include "cgw/halfplane.hpp"

#include "cgw/errors.hpp"
#include "cgw/types.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace cgw {

namespace {

constexpr int kLagrangeX = 10;

// Equispaced Lagrange weights for s in [0, n-1].
void lagrange_equispaced(double s, int n, double* w)
{
    for (int l = 0; l < n; ++l) {
        double num = 1.0, den = 1.0;
        for (int q = 0; q < n; ++q) {
            if (q == l)
                continue;
            num *= s - q;
            den *= l - q;
        }
        w[l] = num / den;
    }
}

int wrap(int j, int N) { return ((j % N) + N) % N; }

// Nearest contiguous window of `count` indices around i in [0, n).
int window_start(int i, int count, int n)
{
    int s = i - count / 2;
    return std::clamp(s, 0, std::max(0, n - count));
}

} // namespace

std::vector<double> default_y_nodes(int ny_strip, double H, double ratio)
{
    ChebStrip c(ny_strip);
    std::vector<double> ys = c.y;
    double step = c.y[ny_strip - 1] - c.y[ny_strip];
    double y = -1.0;
    while (y > -H) {
        step *= ratio;
        y = std::max(-H, y - step);
        ys.push_back(y);
    }
    return ys;
}

// ---------------------------------------------------------------------------
// HalfPlaneField

HalfPlaneField::HalfPlaneField(PeriodicGrid g, std::vector<double> ys)
    : g_(g), ys_(std::move(ys)), v_(RowMat::Zero(ys_.size(), g.N))
{
    for (size_t i = 1; i < ys_.size(); ++i)
        if (!(ys_[i] < ys_[i - 1]))
            throw PreconditionError("half-plane Y nodes must decrease strictly");
}

HalfPlaneField::HalfPlaneField(PeriodicGrid g, std::vector<double> ys, RowMat values)
    : HalfPlaneField(g, std::move(ys))
{
    if (values.rows() != v_.rows() || values.cols() != v_.cols())
        throw PreconditionError("half-plane values do not match the grid");
    v_ = std::move(values);
}

std::vector<double> HalfPlaneField::row(int iy) const
{
    return std::vector<double>(v_.row(iy).data(), v_.row(iy).data() + g_.N);
}

HalfPlaneField HalfPlaneField::dx(int order) const
{
    Spectral1D fft(g_);
    HalfPlaneField out(g_, ys_);
    for (int i = 0; i < v_.rows(); ++i) {
        auto d = fft.derivative(row(i), order);
        std::copy(d.begin(), d.end(), out.v_.row(i).data());
    }
    return out;
}

HalfPlaneField HalfPlaneField::dy(int order) const
{
    HalfPlaneField out(g_, ys_);
    const int n = static_cast<int>(ys_.size());
    const int count = std::min(n, order + 4);
    for (int i = 0; i < n; ++i) {
        int s = window_start(i, count, n);
        std::vector<double> xs(ys_.begin() + s, ys_.begin() + s + count);
        Eigen::MatrixXd w = fornberg_weights(ys_[i], xs, order);
        for (int q = 0; q < count; ++q)
            out.v_.row(i) += w(order, q) * v_.row(s + q);
    }
    return out;
}

double HalfPlaneField::eval(double X, double Y) const
{
    const int n = static_cast<int>(ys_.size());
    if (Y > ys_.front() + 1e-14 || Y < ys_.back() - 1e-14)
        throw PreconditionError(fmt::format("Y = {:g} outside the field's grid", Y));
    const double h = g_.h();
    double t = (X + g_.L) / h;
    int j0 = static_cast<int>(std::floor(t));
    double wx[kLagrangeX];
    lagrange_equispaced(t - j0 + (kLagrangeX / 2 - 1), kLagrangeX, wx);
    // locate Y
    int iy = 0;
    while (iy + 1 < n && ys_[iy + 1] >= Y)
        ++iy;
    const int count = std::min(n, 6);
    int s = window_start(iy, count, n);
    std::vector<double> xs(ys_.begin() + s, ys_.begin() + s + count);
    Eigen::MatrixXd wy = fornberg_weights(Y, xs, 0);
    double acc = 0.0;
    for (int q = 0; q < count; ++q) {
        double r = 0.0;
        for (int l = 0; l < kLagrangeX; ++l)
            r += wx[l] * v_(s + q, wrap(j0 - (kLagrangeX / 2 - 1) + l, g_.N));
        acc += wy(0, q) * r;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Strip solver

struct StripSolver::Factor {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

StripSolver::StripSolver(PeriodicGrid g, int ny)
    : fft_(std::make_unique<Spectral1D>(g)), cheb_(ny)
{
    const double bytes = double(g.modes()) * (ny + 1) * (ny + 1) * 8.0;
    if (bytes < 3.0e8) {
        lu_.resize(g.modes());
        for (int m = 0; m < g.modes(); ++m)
            lu_[m] = factor(m);
    }
}

StripSolver::~StripSolver() = default;

std::unique_ptr<StripSolver::Factor> StripSolver::factor(int m) const
{
    const int n = cheb_.n;
    const double k = xgrid().k(m);
    Eigen::MatrixXd A = cheb_.D2;
    for (int i = 0; i <= n; ++i)
        A(i, i) -= k * k;
    A.row(0).setZero();
    A(0, 0) = 1.0;
    // bounded harmonic continuation below: Psi_Y = |k| Psi at Y = -1
    A.row(n) = cheb_.D.row(n);
    A(n, n) -= k;
    auto f = std::make_unique<Factor>();
    f->lu.compute(A);
    return f;
}

StripField StripSolver::zero() const
{
    StripField z;
    z.ctx = this;
    z.v = RowMat::Zero(cheb_.n + 1, xgrid().N);
    return z;
}

StripField StripSolver::from_function(const std::function<double(double, double)>& fn) const
{
    StripField z = zero();
    for (int i = 0; i <= cheb_.n; ++i)
        for (int j = 0; j < xgrid().N; ++j)
            z.v(i, j) = fn(xgrid().x(j), cheb_.y[i]);
    return z;
}

RowMat StripSolver::rows_dX(const RowMat& v, int order) const
{
    RowMat out(v.rows(), v.cols());
    const int N = xgrid().N;
    std::vector<double> r(N);
    for (int i = 0; i < v.rows(); ++i) {
        std::copy(v.row(i).data(), v.row(i).data() + N, r.begin());
        auto d = fft_->derivative(r, order);
        std::copy(d.begin(), d.end(), out.row(i).data());
    }
    return out;
}

StripField StripSolver::solve(const RowMat& f, const std::vector<double>& h) const
{
    const int n = cheb_.n;
    const int N = xgrid().N;
    const int M = xgrid().modes();
    if (f.rows() != n + 1 || f.cols() != N || static_cast<int>(h.size()) != N)
        throw PreconditionError("strip solve: source or trace has the wrong shape");
    std::vector<std::vector<cplx>> F(n + 1);
    std::vector<double> r(N);
    for (int i = 1; i < n; ++i) {
        std::copy(f.row(i).data(), f.row(i).data() + N, r.begin());
        F[i] = fft_->forward(r);
    }
    auto Hc = fft_->forward(h);
    std::vector<std::vector<cplx>> S(n + 1, std::vector<cplx>(M));
    Eigen::MatrixXd b(n + 1, 2), x;
    for (int m = 0; m < M; ++m) {
        b.setZero();
        b(0, 0) = Hc[m].real();
        b(0, 1) = Hc[m].imag();
        for (int i = 1; i < n; ++i) {
            b(i, 0) = F[i][m].real();
            b(i, 1) = F[i][m].imag();
        }
        if (!lu_.empty())
            x = lu_[m]->lu.solve(b);
        else
            x = factor(m)->lu.solve(b);
        for (int i = 0; i <= n; ++i)
            S[i][m] = cplx(x(i, 0), x(i, 1));
    }
    StripField out = zero();
    for (int i = 0; i <= n; ++i) {
        auto row = fft_->inverse(S[i]);
        std::copy(row.begin(), row.end(), out.v.row(i).data());
    }
    return out;
}

// ---------------------------------------------------------------------------
// StripField

RowMat StripField::dX(int order) const { return ctx->rows_dX(v, order); }

RowMat StripField::dY(int order) const
{
    RowMat out = v;
    for (int o = 0; o < order; ++o)
        out = ctx->cheb().D * out;
    return out;
}

RowMat StripField::dXY() const { return ctx->cheb().D * dX(1); }

std::vector<double> StripField::trace() const
{
    return std::vector<double>(v.row(0).data(), v.row(0).data() + v.cols());
}

StripField& StripField::operator+=(const StripField& o)
{
    v += o.v;
    return *this;
}

StripField StripField::operator-(const StripField& o) const
{
    StripField r = *this;
    r.v -= o.v;
    return r;
}

HalfPlaneField StripField::sample(const std::vector<double>& ys) const
{
    const auto& g = ctx->xgrid();
    const int n = ctx->ny();
    HalfPlaneField out(g, ys);
    std::vector<double> bottom(v.row(n).data(), v.row(n).data() + g.N);
    auto cb = ctx->fft().forward(bottom);
    for (size_t i = 0; i < ys.size(); ++i) {
        double y = ys[i];
        if (y >= -1.0) {
            Eigen::RowVectorXd w = ctx->cheb().interp_row(y);
            out.values().row(i) = w * v;
        } else {
            std::vector<cplx> c(cb);
            for (int m = 0; m < g.modes(); ++m)
                c[m] *= std::exp(g.k(m) * (y + 1.0));
            auto row = ctx->fft().inverse(c);
            std::copy(row.begin(), row.end(), out.values().row(i).data());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// StripSampler

StripSampler::StripSampler(const StripField& f) : ctx_(f.ctx)
{
    v_ = f.v;
    vx_ = f.dX(1);
    vxx_ = f.dX(2);
    vy_ = f.dY(1);
    vyy_ = f.dY(2);
    vxy_ = ctx_->cheb().D * vx_;
    const int n = ctx_->ny();
    const int N = ctx_->xgrid().N;
    std::vector<double> b(v_.row(n).data(), v_.row(n).data() + N);
    bottom_ = ctx_->fft().forward(b);
}

StripSampler::Jet StripSampler::eval(double X, double Y) const
{
    const auto& g = ctx_->xgrid();
    const int n = ctx_->ny();
    Jet J{0, 0, 0, 0, 0, 0};
    if (Y >= -1.0) {
        double t = (X + g.L) / g.h();
        int j0 = static_cast<int>(std::floor(t));
        double wx[kLagrangeX];
        lagrange_equispaced(t - j0 + (kLagrangeX / 2 - 1), kLagrangeX, wx);
        Eigen::RowVectorXd wy = ctx_->cheb().interp_row(std::min(Y, 0.0));
        const RowMat* mats[6] = {&v_, &vx_, &vy_, &vxx_, &vxy_, &vyy_};
        double* outs[6] = {&J.v, &J.x, &J.y, &J.xx, &J.xy, &J.yy};
        for (int q = 0; q < 6; ++q) {
            double acc = 0.0;
            for (int i = 0; i <= n; ++i) {
                if (wy(i) == 0.0)
                    continue;
                double r = 0.0;
                for (int l = 0; l < kLagrangeX; ++l)
                    r += wx[l] * (*mats[q])(i, wrap(j0 - (kLagrangeX / 2 - 1) + l, g.N));
                acc += wy(i) * r;
            }
            *outs[q] = acc;
        }
        return J;
    }
    // harmonic continuation below the strip
    const int M = g.modes();
    const double t = X + g.L;
    const double dep = Y + 1.0;
    for (int m = 0; m < M; ++m) {
        double k = g.k(m);
        double e = std::exp(k * dep);
        if (e < 1e-18)
            break;
        cplx c = bottom_[m] * std::polar(e, k * t);
        double w = (m == 0 || m == M - 1) ? 1.0 : 2.0;
        double odd = (m == M - 1) ? 0.0 : w;
        J.v += w * c.real();
        J.x += -odd * k * c.imag();
        J.y += w * k * c.real();
        J.xx += -w * k * k * c.real();
        J.xy += -odd * k * k * c.imag();
    }
    J.yy = -J.xx;
    double s = 1.0 / g.N;
    J.v *= s;
    J.x *= s;
    J.y *= s;
    J.xx *= s;
    J.xy *= s;
    J.yy *= s;
    return J;
}

// ---------------------------------------------------------------------------
// Kernels and closures

double green_halfplane(double X, double Y, double W, double Z)
{
    double dx2 = (W - X) * (W - X);
    double a = dx2 + (Z - Y) * (Z - Y);
    double b = dx2 + (Z + Y) * (Z + Y);
    if (a == 0.0)
        throw SingularPointError("Green's function at its source point");
    return -(std::log(a) - std::log(b)) / (4.0 * pi);
}

double image_sum(double X, double a, double L)
{
    if (a <= 0.0)
        return 0.0;
    double q = pi * a / L;
    double full;
    if (q > 30.0)
        full = pi / (2.0 * L);
    else
    {
        // cosh q - cos v without cancellation near the origin
        double sh = std::sinh(0.5 * q), sn = std::sin(0.5 * pi * X / L);
        full = (pi / (2.0 * L)) * std::sinh(q) / (2.0 * (sh * sh + sn * sn));
    }
    return full - a / (X * X + a * a);
}

namespace {

// Least-squares C in h ~ C/X^2 on the outer part of one side.
double edge_tail_coefficient(const std::vector<double>& h, const PeriodicGrid& g, int side)
{
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.N; ++j) {
        double X = g.x(j);
        if (side * X < 0.6 * g.L)
            continue;
        double q = 1.0 / (X * X);
        num += h[j] * q;
        den += q * q;
    }
    return den > 0.0 ? num / den : 0.0;
}

// Poisson extension of C/W^2 on W > L (side +1) or W < -L (side -1).
double tail_extension(double C, int side, double X, double a, double L)
{
    if (C == 0.0 || a <= 0.0)
        return 0.0;
    X *= side;
    double I;
    if (std::abs(X) < 0.5 * L) {
        // smooth in t = 1/W: int_0^{1/L} t^2 / ((X t - 1)^2 + a^2 t^2) dt
        static const auto rule = [] {
            std::vector<double> x, w;
            gauss_legendre(16, 0.0, 1.0, x, w);
            return std::make_pair(x, w);
        }();
        I = 0.0;
        for (size_t q = 0; q < rule.first.size(); ++q) {
            double t = rule.first[q] / L;
            double d = X * t - 1.0;
            I += rule.second[q] / L * t * t / (d * d + a * a * t * t);
        }
    } else {
        // partial fractions of 1/(W^2 ((W - X)^2 + a^2))
        double s = X * X + a * a;
        double A = 2.0 * X / (s * s);
        double QL = (L - X) * (L - X) + a * a;
        I = 0.5 * A * std::log(QL / (L * L)) + 1.0 / (s * L)
            + (X * X - a * a) / (a * s * s) * (0.5 * pi - std::atan((L - X) / a));
    }
    return C * a / pi * I;
}

} // namespace

HalfPlaneField harmonic_extension(const std::vector<double>& h, const PeriodicGrid& g,
                                  const std::vector<double>& ys, int, Warnings* warn)
{
    if (static_cast<int>(h.size()) != g.N)
        throw PreconditionError("harmonic_extension: boundary samples do not match the grid");
    Spectral1D fft(g);
    auto c = fft.forward(h);
    HalfPlaneField out(g, ys);
    for (size_t i = 0; i < ys.size(); ++i) {
        std::vector<cplx> ci(c);
        for (int m = 0; m < g.modes(); ++m)
            ci[m] *= std::exp(g.k(m) * ys[i]);
        auto row = fft.inverse(ci);
        std::copy(row.begin(), row.end(), out.values().row(i).data());
    }

    double hmax = 0.0, edge = 0.0;
    for (int j = 0; j < g.N; ++j) {
        hmax = std::max(hmax, std::abs(h[j]));
        if (std::abs(g.x(j)) >= 0.95 * g.L)
            edge = std::max(edge, std::abs(h[j]));
    }
    if (hmax == 0.0)
        return out;
    if (edge > 1e-3 * hmax) {
        if (warn)
            warn->add(fmt::format("boundary data does not decay at the grid edge (|h| = {:.3g}); "
                                  "periodic extension used without far-edge closure", edge));
        return out;
    }
    // The periodic transform extends the periodic sum of the truncated data; its
    // nonzero images are removed by a zero-padded convolution with the image kernel.
    PeriodicGrid g2{2.0 * g.L, 2 * g.N};
    Spectral1D fft2(g2);
    std::vector<double> hp(2 * g.N, 0.0), kern(2 * g.N);
    std::copy(h.begin(), h.end(), hp.begin());
    auto hhat = fft2.forward(hp);
    double Cp = edge_tail_coefficient(h, g, +1), Cm = edge_tail_coefficient(h, g, -1);
    for (size_t i = 0; i < ys.size(); ++i) {
        double a = -ys[i];
        if (a <= 0.0)
            continue;
        for (int m = 0; m < 2 * g.N; ++m) {
            int off = m < g.N ? m : m - 2 * g.N;
            kern[m] = m == g.N ? 0.0 : image_sum(off * g.h(), a, g.L) / pi;
        }
        auto khat = fft2.forward(kern);
        for (size_t q = 0; q < khat.size(); ++q)
            khat[q] *= hhat[q];
        auto images = fft2.inverse(khat);
        for (int j = 0; j < g.N; ++j) {
            double X = g.x(j);
            double corr = -images[j] * g.h();
            corr += tail_extension(Cp, +1, X, a, g.L) + tail_extension(Cm, -1, X, a, g.L);
            out.at(i, j) += corr;
        }
    }
    return out;
}

namespace {

void check_strip_support(const std::function<double(double, double)>& f, const PeriodicGrid& g)
{
    for (double y : {-1.0 - 1e-9, -1.001, -1.1, -1.5, -2.0, -4.0})
        for (int j = 0; j < g.N; ++j)
            if (f(g.x(j), y) != 0.0)
                throw PreconditionError(fmt::format(
                    "strip source is nonzero at ({:g}, {:g}), outside -1 <= Y <= 0", g.x(j), y));
}

} // namespace

HalfPlaneField strip_green_solve(const std::function<double(double, double)>& f,
                                 const PeriodicGrid& g, const std::vector<double>& ys,
                                 int ny_strip)
{
    check_strip_support(f, g);
    StripSolver solver(g, ny_strip);
    StripField src = solver.from_function(f);
    // int f G solves -Lap Psi = f
    StripField psi = solver.solve(-src.v, std::vector<double>(g.N, 0.0));
    HalfPlaneField out = psi.sample(ys);

    // remove periodic images through the source's far-field dipole
    const auto& cy = solver.cheb().y;
    const auto& qw = solver.cheb().quad;
    double D = 0.0, DW = 0.0;
    for (int i = 0; i <= solver.ny(); ++i)
        for (int j = 0; j < g.N; ++j) {
            double fz = src.v(i, j) * cy[i] * qw[i] * g.h();
            D += fz;
            DW += fz * g.x(j);
        }
    if (D != 0.0) {
        double Wc = DW / D;
        for (size_t i = 0; i < ys.size(); ++i) {
            double a = -ys[i];
            if (a <= 0.0)
                continue;
            for (int j = 0; j < g.N; ++j)
                out.at(i, j) += (D / pi) * image_sum(g.x(j) - Wc, a, g.L);
        }
    }
    return out;
}

HalfPlaneField dirichlet_K(const std::vector<double>& eta, const std::function<double(double, double)>& f,
                           const VorticityModel& model, double c1, const PeriodicGrid& g,
                           const std::vector<double>& ys, int ny_strip)
{
    if (static_cast<int>(eta.size()) != g.N)
        throw PreconditionError("dirichlet_K: surface samples do not match the grid");
    std::vector<double> data(g.N);
    for (int j = 0; j < g.N; ++j) {
        double psiV = model.empty() ? 0.0 : stream_function_2d(model, {g.x(j), eta[j]});
        data[j] = -(c1 * eta[j] + psiV);
    }
    HalfPlaneField out = harmonic_extension(data, g, ys, ny_strip);
    HalfPlaneField s = strip_green_solve(f, g, ys, ny_strip);
    out.values() -= s.values();
    return out;
}

// ---------------------------------------------------------------------------
// Weighted norms

namespace {

std::vector<int> pow2_offsets(int limit)
{
    std::vector<int> o;
    for (int d = 1; d <= limit; d *= 2)
        o.push_back(d);
    return o;
}

} // namespace

WeightedNormReport weighted_norm(const HalfPlaneField& f, int order, double alpha)
{
    if (order < 0 || order > 3)
        throw PreconditionError("weighted_norm: order must be in 0..3");
    WeightedNormReport rep;
    rep.order = order;
    rep.alpha = alpha;
    const auto& g = f.xgrid();
    const auto& ys = f.ys();
    rep.grid = fmt::format("L={:g} N_X={} N_Y={} H={:g}", g.L, g.N, ys.size(), -ys.back());
    const int ny = static_cast<int>(ys.size());
    for (int tot = 0; tot <= order; ++tot) {
        for (int bx = 0; bx <= tot; ++bx) {
            HalfPlaneField d = f.dx(bx).dy(tot - bx);
            for (int i = 0; i < ny; ++i)
                for (int j = 0; j < g.N; ++j)
                    rep.sup_part = std::max(rep.sup_part, weight(g.x(j), ys[i]) * std::abs(d.at(i, j)));
            if (tot != order || alpha <= 0.0)
                continue;
            // pairs within unit distance, offsets on a dyadic ladder
            auto ox = pow2_offsets(static_cast<int>(1.0 / g.h()));
            ox.insert(ox.begin(), 0);
            for (int i = 0; i < ny; ++i) {
                for (int i2 = i; i2 < ny && ys[i] - ys[i2] <= 1.0; ++i2) {
                    if (i2 != i && i2 - i > 1 && ((i2 - i) & (i2 - i - 1)) != 0)
                        continue;
                    double dy = ys[i] - ys[i2];
                    for (int sgn : {-1, 1})
                        for (int dj : ox) {
                            if (dj == 0 && (i2 == i || sgn < 0))
                                continue;
                            double dxv = dj * g.h();
                            double dist = std::hypot(dxv, dy);
                            if (dist > 1.0 || dist == 0.0)
                                continue;
                            for (int j = 0; j < g.N; ++j) {
                                int j2 = wrap(j + sgn * dj, g.N);
                                double q = std::abs(d.at(i, j) - d.at(i2, j2)) / std::pow(dist, alpha);
                                rep.holder_part = std::max(rep.holder_part, weight(g.x(j), ys[i]) * q);
                            }
                        }
                }
            }
        }
    }
    rep.value = rep.sup_part + rep.holder_part;
    return rep;
}

WeightedNormReport weighted_norm(const std::vector<double>& b, const PeriodicGrid& g, int order,
                                 double alpha)
{
    if (order < 0 || order > 3)
        throw PreconditionError("weighted_norm: order must be in 0..3");
    WeightedNormReport rep;
    rep.order = order;
    rep.alpha = alpha;
    rep.grid = fmt::format("L={:g} N_X={} boundary", g.L, g.N);
    Spectral1D fft(g);
    for (int o = 0; o <= order; ++o) {
        auto d = fft.derivative(b, o);
        for (int j = 0; j < g.N; ++j)
            rep.sup_part = std::max(rep.sup_part, weight(g.x(j), 0.0) * std::abs(d[j]));
        if (o != order || alpha <= 0.0)
            continue;
        for (int dj : pow2_offsets(static_cast<int>(1.0 / g.h())))
            for (int j = 0; j < g.N; ++j) {
                double q = std::abs(d[j] - d[wrap(j + dj, g.N)]) / std::pow(dj * g.h(), alpha);
                rep.holder_part = std::max(rep.holder_part, weight(g.x(j), 0.0) * q);
            }
    }
    rep.value = rep.sup_part + rep.holder_part;
    return rep;
}

} // namespace cgw
