// Second-order anisotropic TV denoising through the same penalty-relaxed
// primal-dual system as the flow, without time stepping:
//
//   u = f - alpha div(p),   0 = -grad(u) - (1/eps) H(p)
//
// Eliminating u leaves one SPD system in the dual field per damped-Newton
// iteration. This is the comparison baseline for the fourth-order flow.
#pragma once

#include "tvwf/field.hpp"
#include "tvwf/linear_solver.hpp"
#include "tvwf/newton.hpp"

namespace tvwf {

struct TvDenoiseConfig {
    double alpha = 0.1;      // regularization weight
    double eps = 1e-5;       // penalty weight
    double tau0 = 1.0;
    double tau_decay = 0.5;
    double tau_min = 1e-8;
    double eps_tol = 1e-6;
    int max_inner = 50;
    double tol_lin = 1e-10;
    LinearMethod method = LinearMethod::direct;

    void validate() const;
};

struct TvDenoiseResult {
    ScalarField u;
    VectorField p;
    InnerReport report;
};

// Damped-Newton solve of the coupled system. The relative l2 change of the
// u-iterates gates the same dual optimality contract as the flow's inner
// solver (residual and constraint bounds relative to |grad(u)|_inf, with the
// residual check waived below the flat-minimizer noise floor). Non-convergence
// is reported, not thrown: the last iterate comes back with converged = false.
TvDenoiseResult denoise_tv(const ScalarField& f, const TvDenoiseConfig& cfg);

// Fraction of interior pixels whose forward differences in both directions
// fall below 1e-6 * (max u - min u). A constant field counts as fully flat.
double staircase_metric(const ScalarField& u);

// Same flatness test restricted to pixels where ref is *not* flat: measures
// spurious plateaus created on sloped regions of the reference. Returns 0
// when the reference has no sloped pixels.
double staircase_metric(const ScalarField& u, const ScalarField& ref);

}  // namespace tvwf
