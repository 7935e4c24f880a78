#include <cmath>
#include <random>

#include "doctest.h"
#include "tvwf/penalty.hpp"

using namespace tvwf;

namespace {

// Random dual field whose components stay clear of the kinks at +-1 so that
// central differences of F never straddle a kink.
VectorField random_dual(const Grid& g, std::mt19937_64& rng, double kink_margin = 1e-3) {
    std::uniform_real_distribution<double> d(-2.5, 2.5);
    VectorField p(g);
    auto draw = [&] {
        for (;;) {
            double v = d(rng);
            if (std::abs(std::abs(v) - 1.0) >= kink_margin) return v;
        }
    };
    for (double& v : p.comp1) v = draw();
    for (double& v : p.comp2) v = draw();
    return p;
}

}  // namespace

TEST_CASE("penalty vanishes exactly on admissible duals") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    VectorField p(Grid(9, 7));
    for (double& v : p.comp1) v = d(rng);
    for (double& v : p.comp2) v = d(rng);
    CHECK(penalty_value(p) == 0.0);
    CHECK(norm_inf(penalty_grad(p)) == 0.0);
}

TEST_CASE("penalty componentwise values at hand-picked points") {
    VectorField p(Grid(2, 2));
    p.comp1[0] = 1.2;
    p.comp2[1] = -3.0;
    CHECK(penalty_value(p) == doctest::Approx(0.5 * 0.04 + 0.5 * 4.0).epsilon(1e-14));
    VectorField h = penalty_grad(p);
    CHECK(h.comp1[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(h.comp2[1] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(h.comp1[1] == 0.0);
}

TEST_CASE("H at the kink is zero while H' is one (closed-set convention)") {
    VectorField p(Grid(2, 2));
    p.comp1[0] = 1.0;
    p.comp2[0] = -1.0;
    p.comp1[1] = 0.999999;
    VectorField h = penalty_grad(p);
    VectorField j = penalty_jac_diag(p);
    CHECK(h.comp1[0] == 0.0);
    CHECK(j.comp1[0] == 1.0);
    CHECK(h.comp2[0] == 0.0);
    CHECK(j.comp2[0] == 1.0);
    CHECK(j.comp1[1] == 0.0);
}

TEST_CASE("H matches a central finite difference of F away from the kinks") {
    std::mt19937_64 rng(99);
    Grid g(8, 6);
    VectorField p = random_dual(g, rng);
    VectorField h = penalty_grad(p);
    const double delta = 1e-4;  // F is piecewise quadratic: only rounding survives

    auto check_component = [&](std::vector<double>& comp, const std::vector<double>& hcomp) {
        for (std::size_t k = 0; k < comp.size(); ++k) {
            const double saved = comp[k];
            comp[k] = saved + delta;
            const double fp = penalty_value(p);
            comp[k] = saved - delta;
            const double fm = penalty_value(p);
            comp[k] = saved;
            CHECK(std::abs((fp - fm) / (2.0 * delta) - hcomp[k]) <= 1e-6);
        }
    };
    check_component(p.comp1, h.comp1);
    check_component(p.comp2, h.comp2);
}

TEST_CASE("H' is exactly the indicator of |s| >= 1") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    VectorField p(Grid(11, 5));
    for (double& v : p.comp1) v = d(rng);
    for (double& v : p.comp2) v = d(rng);
    VectorField j = penalty_jac_diag(p);
    for (int k = 0; k < p.size(); ++k) {
        CHECK(j.comp1[k] == (std::abs(p.comp1[k]) >= 1.0 ? 1.0 : 0.0));
        CHECK(j.comp2[k] == (std::abs(p.comp2[k]) >= 1.0 ? 1.0 : 0.0));
    }
}

TEST_CASE("evaluate_penalty agrees with the separate calls") {
    std::mt19937_64 rng(21);
    VectorField p = random_dual(Grid(6, 6), rng);
    PenaltyEval e = evaluate_penalty(p);
    CHECK(e.value == penalty_value(p));
    VectorField h = penalty_grad(p);
    VectorField j = penalty_jac_diag(p);
    for (int k = 0; k < p.size(); ++k) {
        CHECK(e.grad.comp1[k] == h.comp1[k]);
        CHECK(e.grad.comp2[k] == h.comp2[k]);
        CHECK(e.jac_diag.comp1[k] == j.comp1[k]);
        CHECK(e.jac_diag.comp2[k] == j.comp2[k]);
    }
}
