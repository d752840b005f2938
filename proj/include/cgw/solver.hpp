#pragma once

#include "cgw/halfplane.hpp"
#include "cgw/surface.hpp"
#include "cgw/vortical.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cgw {

struct SolverSettings {
    PeriodicGrid grid{400.0, 8192};
    int ny = 32;
    double tol = 1e-10;
    int max_outer = 50;
    double varpi_max = 0.5;
    int max_halvings = 4;
};

struct IterationRecord {
    int iter;
    double F1, F2, advection, c1, eta_max;
    double psi_step;  // sup of the Picard update of psi
};

struct WaveState {
    std::shared_ptr<const StripSolver> strip;
    std::shared_ptr<const Spectral1D> fft;
    SurfaceProfile eta;
    StripField psi;
    double c1 = 0.0;
    double varpi = 0.0;
    PhysicalParams params;
    VorticityModel model;
    SolverSettings settings;

    double F1_norm = 0.0, F2_norm = 0.0, advection_norm = 0.0;
    bool converged = false;
    bool dynamically_consistent = true;
    int iterations = 0;
    double picard_contraction = 0.0;
    std::vector<IterationRecord> log;

    const PeriodicGrid& grid() const { return strip->xgrid(); }
};

// Shared numerical context (FFT plans and strip factorisations) for one grid.
struct SolverContext {
    std::shared_ptr<const StripSolver> strip;
    std::shared_ptr<const Spectral1D> fft;
    static SolverContext make(const SolverSettings& s);
};

// The model at strength varpi: a single vortex (default at (0,-1)) gets strength
// varpi, patches are rescaled to total circulation varpi.
VorticityModel model_at_strength(const VorticityModel& base, double varpi);

// Trivial state on the context's grid.
WaveState trivial_state(const SolverContext& ctx, const PhysicalParams& params,
                        const SolverSettings& settings);

struct SolveOptions {
    std::optional<double> fixed_c1;  // frozen-patch mode: user supplied speed
};

WaveState solve_wave(double varpi, const PhysicalParams& params, const VorticityModel& model,
                     const SolverSettings& settings, const WaveState* init = nullptr,
                     const SolveOptions& opts = {}, const SolverContext* ctx = nullptr);

// Irrotational velocity grad-perp psi at a physical point below the surface.
Vec2 irrotational_velocity(const WaveState& s, const StripSampler& sampler, const Vec2& x);
Vec2 total_velocity(const WaveState& s, const StripSampler& sampler, const Vec2& x);

// c - (regular velocity at the first vortex center).
Vec2 advection_residual(const WaveState& s);
// Regular velocity at the vortex (advection speed implied by psi).
double advection_speed(const WaveState& s);

struct ContinuationEntry {
    double varpi;
    double c1;
    double eta_max;
    double excess_mass;
    double abs_mass;
    double F1, F2, advection;
    int iterations;
    double picard_contraction;
    std::shared_ptr<WaveState> state;
};

struct ContinuationRecord {
    std::vector<ContinuationEntry> entries;
    bool truncated = false;
    std::string reason;
};

ContinuationRecord continuation_sweep(const std::vector<double>& varpis, const PhysicalParams& params,
                                      const VorticityModel& model, const SolverSettings& settings);

} // namespace cgw
