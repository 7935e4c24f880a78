#include "tvwf/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvwf {

double dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) s += a.values[k] * b.values[k];
    return s;
}

double dot(const VectorField& a, const VectorField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.comp1.size(); ++k) s += a.comp1[k] * b.comp1[k];
    for (std::size_t k = 0; k < a.comp2.size(); ++k) s += a.comp2[k] * b.comp2[k];
    return s;
}

double norm2(const ScalarField& a) { return std::sqrt(dot(a, a)); }
double norm2(const VectorField& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const ScalarField& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v));
    return m;
}

double norm_inf(const VectorField& a) {
    double m = 0.0;
    for (double v : a.comp1) m = std::max(m, std::abs(v));
    for (double v : a.comp2) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const ScalarField& a) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : a.values) m = std::min(m, v);
    return m;
}

double max_value(const ScalarField& a) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : a.values) m = std::max(m, v);
    return m;
}

double sum(const ScalarField& a) {
    double s = 0.0;
    for (double v : a.values) s += v;
    return s;
}

bool all_finite(const ScalarField& a) {
    for (double v : a.values)
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(const VectorField& a) {
    for (double v : a.comp1)
        if (!std::isfinite(v)) return false;
    for (double v : a.comp2)
        if (!std::isfinite(v)) return false;
    return true;
}

void require_finite(const ScalarField& a, const char* what) {
    if (!all_finite(a)) throw Error(std::string(what) + ": field contains NaN or Inf");
}

void require_finite(const VectorField& a, const char* what) {
    if (!all_finite(a)) throw Error(std::string(what) + ": field contains NaN or Inf");
}

}  // namespace tvwf
