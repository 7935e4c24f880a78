#include "tvwf/penalty.hpp"

#include <cmath>

namespace tvwf {
namespace {

inline double clip_excess(double s) { return std::max(std::abs(s) - 1.0, 0.0); }

inline double h_scalar(double s) {
    const double a = std::abs(s);
    return a >= 1.0 ? (s >= 0.0 ? a - 1.0 : 1.0 - a) : 0.0;
}

inline double indicator(double s) { return std::abs(s) >= 1.0 ? 1.0 : 0.0; }

}  // namespace

double penalty_value(const VectorField& p) {
    double acc = 0.0;
    for (double s : p.comp1) {
        const double e = clip_excess(s);
        acc += e * e;
    }
    for (double s : p.comp2) {
        const double e = clip_excess(s);
        acc += e * e;
    }
    return 0.5 * acc;
}

VectorField penalty_grad(const VectorField& p) {
    VectorField out(p.grid);
    for (std::size_t k = 0; k < p.comp1.size(); ++k) out.comp1[k] = h_scalar(p.comp1[k]);
    for (std::size_t k = 0; k < p.comp2.size(); ++k) out.comp2[k] = h_scalar(p.comp2[k]);
    return out;
}

VectorField penalty_jac_diag(const VectorField& p) {
    VectorField out(p.grid);
    for (std::size_t k = 0; k < p.comp1.size(); ++k) out.comp1[k] = indicator(p.comp1[k]);
    for (std::size_t k = 0; k < p.comp2.size(); ++k) out.comp2[k] = indicator(p.comp2[k]);
    return out;
}

PenaltyEval evaluate_penalty(const VectorField& p) {
    return PenaltyEval{penalty_value(p), penalty_grad(p), penalty_jac_diag(p)};
}

}  // namespace tvwf
