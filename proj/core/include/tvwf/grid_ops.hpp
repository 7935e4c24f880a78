// Discrete differential operators on the uniform grid.
//
// grad uses forward differences with a zero row/column at the far boundary;
// div is its exact negative adjoint (backward differences with matching
// boundary closure), so <grad u, p> = -<u, div p> holds for every u and p.
// This encodes homogeneous no-flux boundary conditions and makes any field of
// the form div(p) sum to zero over the grid.
#pragma once

#include "tvwf/field.hpp"

namespace tvwf {

VectorField grad(const ScalarField& u);
ScalarField div(const VectorField& p);

// Mobility-weighted elliptic operator q -> div(w grad q). The weight on each
// face is the arithmetic mean of the two adjacent pixel values of w, clamped
// below at zero, which keeps the operator symmetric negative semidefinite.
// Rejects w with entries below min_weight (positivity breach upstream); the
// solver passes its own floor here after validating it once per step.
ScalarField weighted_elliptic(const ScalarField& w, const ScalarField& q,
                              double min_weight = -1e-12);

}  // namespace tvwf
