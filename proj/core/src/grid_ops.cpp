#include "tvwf/grid_ops.hpp"

#include <algorithm>

namespace tvwf {

VectorField grad(const ScalarField& u) {
    const Grid& g = u.grid;
    VectorField out(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            out.comp1[k] = (i < g.nx - 1) ? (u.values[k + 1] - u.values[k]) * inv_h : 0.0;
            out.comp2[k] = (j < g.ny - 1) ? (u.values[k + g.nx] - u.values[k]) * inv_h : 0.0;
        }
    }
    return out;
}

ScalarField div(const VectorField& p) {
    const Grid& g = p.grid;
    ScalarField out(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            double d1;
            if (i == 0)
                d1 = p.comp1[k];
            else if (i < g.nx - 1)
                d1 = p.comp1[k] - p.comp1[k - 1];
            else
                d1 = -p.comp1[k - 1];
            double d2;
            if (j == 0)
                d2 = p.comp2[k];
            else if (j < g.ny - 1)
                d2 = p.comp2[k] - p.comp2[k - g.nx];
            else
                d2 = -p.comp2[k - g.nx];
            out.values[k] = (d1 + d2) * inv_h;
        }
    }
    return out;
}

ScalarField weighted_elliptic(const ScalarField& w, const ScalarField& q, double min_weight) {
    const Grid& g = w.grid;
    if (!(g == q.grid)) throw Error("weighted_elliptic: w and q live on different grids");
    for (double v : w.values)
        if (v < min_weight) throw Error("weighted_elliptic: mobility has negative entries");

    // div(W grad q) with face weights max((w_a+w_b)/2, 0); missing faces at the
    // boundary drop out, which is the no-flux closure.
    ScalarField out(g);
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            double acc = 0.0;
            if (i < g.nx - 1) {
                const double wf = std::max(0.5 * (w.values[k] + w.values[k + 1]), 0.0);
                acc += wf * (q.values[k + 1] - q.values[k]);
            }
            if (i > 0) {
                const double wf = std::max(0.5 * (w.values[k - 1] + w.values[k]), 0.0);
                acc += wf * (q.values[k - 1] - q.values[k]);
            }
            if (j < g.ny - 1) {
                const double wf = std::max(0.5 * (w.values[k] + w.values[k + g.nx]), 0.0);
                acc += wf * (q.values[k + g.nx] - q.values[k]);
            }
            if (j > 0) {
                const double wf = std::max(0.5 * (w.values[k - g.nx] + w.values[k]), 0.0);
                acc += wf * (q.values[k - g.nx] - q.values[k]);
            }
            out.values[k] = acc * inv_h2;
        }
    }
    return out;
}

}  // namespace tvwf
