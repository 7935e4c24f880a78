#include "tvwf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tvwf/grid_ops.hpp"

namespace tvwf {

ScalarField normalize_mass(const ScalarField& u, double h) {
    if (!(h > 0.0)) throw Error("normalize_mass: h must be positive");
    require_finite(u, "normalize_mass: u");
    if (min_value(u) < 0.0) throw Error("normalize_mass: u has negative entries");
    const double m = h * h * sum(u);
    if (!(m > 0.0)) throw Error("normalize_mass: input has no mass");
    const double scale = 1.0 / m;
    ScalarField out = u;
    if (scale != 1.0)
        for (double& v : out.values) v *= scale;
    return out;
}

FlowResult evolve(const FlowRun& run, const FlowObserver& observer) {
    run.config.validate();
    if (run.n_steps < 1) throw Error("evolve: n_steps must be at least 1");
    if (run.frame_stride < 0) throw Error("evolve: frame_stride must be nonnegative");
    require_finite(run.initial, "evolve: initial");
    if (min_value(run.initial) < 0.0) throw Error("evolve: initial data must be nonnegative");
    if (!(sum(run.initial) > 0.0)) throw Error("evolve: initial data has no mass");

    const double h = run.config.h;
    ScalarField U = run.initial;
    VectorField P(U.grid);  // zero dual at t = 0

    FlowResult result{U, {}};
    result.diagnostics.reserve(static_cast<std::size_t>(run.n_steps));
    if (run.frame_stride > 0 && observer.on_frame) observer.on_frame(0, U);

    for (int step = 1; step <= run.n_steps; ++step) {
        InnerResult inner = solve_inner(U, P, run.config);
        if (!inner.report.converged && run.strict)
            throw NonConvergenceError("evolve: inner iteration did not converge", step);

        double diff2 = 0.0;
        for (std::size_t k = 0; k < U.values.size(); ++k) {
            const double d = inner.U.values[k] - U.values[k];
            diff2 += d * d;
        }
        U = std::move(inner.U);
        P = std::move(inner.P);
        const double grad_scale = norm_inf(grad(U));

        if (run.clamp_renormalize) {
            const double before = sum(U);
            for (double& v : U.values) v = std::max(v, 0.0);
            const double after = sum(U);
            if (after > 0.0 && after != before) {
                const double scale = before / after;
                for (double& v : U.values) v *= scale;
            }
        }

        StepDiagnostics diag;
        diag.step = step;
        diag.mass = h * h * sum(U);
        diag.min_u = min_value(U);
        diag.max_u = max_value(U);
        diag.inner_iterations = inner.report.iterations_used;
        diag.converged = inner.report.converged;
        diag.rel_update_final = inner.report.final_rel_update;
        diag.max_constraint_violation = inner.report.max_constraint_violation;
        diag.l2_change = std::sqrt(diff2);
        diag.nonlinear_residual = inner.report.final_nonlinear_residual;
        diag.grad_inf = grad_scale;
        result.diagnostics.push_back(diag);
        if (observer.on_step) observer.on_step(diag);
        if (run.frame_stride > 0 && observer.on_frame && step % run.frame_stride == 0)
            observer.on_frame(step, U);
    }

    result.final = std::move(U);
    return result;
}

}  // namespace tvwf
