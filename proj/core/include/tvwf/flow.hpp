// Outer time stepping for u_t = div(u grad q), q in the TV subdifferential:
// repeated implicit steps through newton::solve_inner with a warm-started
// dual field, per-step diagnostics, and optional frame emission.
#pragma once

#include <functional>
#include <vector>

#include "tvwf/newton.hpp"

namespace tvwf {

struct FlowRun {
    SolverConfig config;
    int n_steps = 1;
    ScalarField initial;
    bool clamp_renormalize = false;  // clamp negatives post-step, rescale mass
    int frame_stride = 0;            // 0 = no frames
    bool strict = false;             // abort on inner non-convergence
};

struct StepDiagnostics {
    int step = 0;
    double mass = 0.0;  // raw h^2-weighted pixel sum, never renormalized
    double min_u = 0.0;
    double max_u = 0.0;
    int inner_iterations = 0;
    bool converged = false;
    double rel_update_final = 0.0;
    double max_constraint_violation = 0.0;
    double l2_change = 0.0;           // |U_{n+1} - U_n|_2
    double nonlinear_residual = 0.0;  // |-grad(U) - (1/eps) H(P)|_inf at the accepted iterate
    double grad_inf = 0.0;            // |grad(U_{n+1})|_inf, the scale the residual is judged against
};

struct FlowObserver {
    std::function<void(const StepDiagnostics&)> on_step;
    // Called with step 0 for the initial field, then after every
    // frame_stride-th completed step.
    std::function<void(int, const ScalarField&)> on_frame;
};

struct FlowResult {
    ScalarField final;
    std::vector<StepDiagnostics> diagnostics;
};

// Scales u so that h^2 * sum(values) = 1. Rejects nonpositive-mass input.
ScalarField normalize_mass(const ScalarField& u, double h);

// Runs the flow. Throws NonConvergenceError on a non-converged step in
// strict mode and propagates SolveError from the linear algebra; otherwise
// non-converged steps are recorded in the diagnostics and the run continues.
FlowResult evolve(const FlowRun& run, const FlowObserver& observer = {});

}  // namespace tvwf
