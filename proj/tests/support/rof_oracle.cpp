#include "rof_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "tvwf/grid_ops.hpp"

namespace tvwf::testing {

ScalarField rof_denoise_oracle(const ScalarField& f, double alpha, int iterations) {
    const Grid& g = f.grid;
    VectorField p(g), y(g), p_prev(g);
    double t = 1.0;
    // |G G^T| <= 8 / h^2 for the forward-difference stencil
    const double step = g.h * g.h / (8.0 * alpha * alpha);

    for (int k = 0; k < iterations; ++k) {
        // residual of the dual objective at y: alpha G^T y - f = -alpha div(y) - f
        ScalarField r = div(y);
        for (int i = 0; i < r.size(); ++i) r.values[i] = -alpha * r.values[i] - f.values[i];
        VectorField gr = grad(r);

        p_prev = p;
        for (int i = 0; i < g.size(); ++i) {
            p.comp1[i] = std::clamp(y.comp1[i] - step * alpha * gr.comp1[i], -1.0, 1.0);
            p.comp2[i] = std::clamp(y.comp2[i] - step * alpha * gr.comp2[i], -1.0, 1.0);
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double w = (t - 1.0) / t_next;
        for (int i = 0; i < g.size(); ++i) {
            y.comp1[i] = p.comp1[i] + w * (p.comp1[i] - p_prev.comp1[i]);
            y.comp2[i] = p.comp2[i] + w * (p.comp2[i] - p_prev.comp2[i]);
        }
        t = t_next;
    }

    ScalarField u = div(p);
    for (int i = 0; i < u.size(); ++i) u.values[i] = f.values[i] + alpha * u.values[i];
    return u;
}

}  // namespace tvwf::testing
