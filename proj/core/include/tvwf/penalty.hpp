// Quadratic penalty relaxing the box constraint |p| <= 1 on the dual field,
// applied to each component separately (anisotropic form):
//
//   F(p) = 1/2 sum max(|p1|-1, 0)^2 + 1/2 sum max(|p2|-1, 0)^2
//
// H is the componentwise derivative s -> sgn(s)(|s|-1) 1{|s|>=1} and H' its
// diagonal Jacobian, the indicator 1{|s|>=1}. The closed-set convention at
// |s| = 1 gives H = 0 together with H' = 1 there.
#pragma once

#include "tvwf/field.hpp"

namespace tvwf {

struct PenaltyEval {
    double value = 0.0;     // F(p), nonnegative; zero iff p is admissible
    VectorField grad;       // H(p)
    VectorField jac_diag;   // diagonal of H'(p), entries exactly 0 or 1
};

double penalty_value(const VectorField& p);
VectorField penalty_grad(const VectorField& p);
VectorField penalty_jac_diag(const VectorField& p);
PenaltyEval evaluate_penalty(const VectorField& p);

}  // namespace tvwf
