// Uniform 2D grid and the scalar / vector fields living on it.
//
// Fields are dense, row-major (index = j*nx + i with i the x index), and own
// their storage. A VectorField stores the two components as separate planes;
// comp1[i,j] is co-located with the x-face between pixels (i,j) and (i+1,j),
// comp2 with the y-face between (i,j) and (i,j+1).
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tvwf/errors.hpp"

namespace tvwf {

struct Grid {
    int nx = 0;
    int ny = 0;
    double h = 1.0;  // one spacing for both axes

    Grid() = default;
    Grid(int nx_, int ny_, double h_ = 1.0) : nx(nx_), ny(ny_), h(h_) {
        if (nx < 2 || ny < 2) throw Error("Grid: nx and ny must be >= 2");
        if (!(h > 0.0) || !std::isfinite(h)) throw Error("Grid: h must be positive and finite");
    }

    int size() const { return nx * ny; }
    int index(int i, int j) const { return j * nx + i; }
    bool operator==(const Grid& o) const { return nx == o.nx && ny == o.ny && h == o.h; }
};

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.size()), fill) {}
    ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != g.size())
            throw Error("ScalarField: value count does not match grid");
    }

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(grid.index(i, j))]; }
    double operator()(int i, int j) const {
        return values[static_cast<std::size_t>(grid.index(i, j))];
    }
    int size() const { return grid.size(); }
};

struct VectorField {
    Grid grid;
    std::vector<double> comp1;  // x component
    std::vector<double> comp2;  // y component

    VectorField() = default;
    explicit VectorField(const Grid& g, double fill = 0.0)
        : grid(g),
          comp1(static_cast<std::size_t>(g.size()), fill),
          comp2(static_cast<std::size_t>(g.size()), fill) {}

    int size() const { return grid.size(); }
};

// -- small field algebra helpers ---------------------------------------------

double dot(const ScalarField& a, const ScalarField& b);
double dot(const VectorField& a, const VectorField& b);
double norm2(const ScalarField& a);
double norm2(const VectorField& a);
double norm_inf(const ScalarField& a);
double norm_inf(const VectorField& a);
double min_value(const ScalarField& a);
double max_value(const ScalarField& a);
double sum(const ScalarField& a);

bool all_finite(const ScalarField& a);
bool all_finite(const VectorField& a);

// Throws Error if the field contains NaN or Inf; `what` names the offender.
void require_finite(const ScalarField& a, const char* what);
void require_finite(const VectorField& a, const char* what);

}  // namespace tvwf
