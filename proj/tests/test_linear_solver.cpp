#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tvwf/grid_ops.hpp"
#include "tvwf/linear_solver.hpp"

using namespace tvwf;

namespace {

std::mt19937_64 rng(314);

std::vector<double> random_vec(int n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = d(rng);
    return x;
}

// shifted graph Laplacian: SPD, well conditioned, same sparsity family as the
// reduced Newton system
SparseMatrix test_matrix(const Grid& g, double shift) {
    SparseMatrix G = assemble_grad_matrix(g);
    return G.transpose().multiply(G).plus_scaled_identity(shift);
}

double backward_error(const SparseMatrix& A, std::span<const double> x, std::span<const double> b) {
    auto ax = A.multiply(x);
    double r2 = 0.0, x2 = 0.0, b2 = 0.0;
    for (std::size_t k = 0; k < ax.size(); ++k) {
        const double r = ax[k] - b[k];
        r2 += r * r;
        b2 += b[k] * b[k];
    }
    for (double v : x) x2 += v * v;
    double norm_a = 0.0;
    auto off = A.row_offsets();
    auto val = A.values();
    for (int i = 0; i < A.rows(); ++i) {
        double row = 0.0;
        for (int k = off[i]; k < off[i + 1]; ++k) row += std::abs(val[static_cast<std::size_t>(k)]);
        norm_a = std::max(norm_a, row);
    }
    return std::sqrt(r2) / (norm_a * std::sqrt(x2) + std::sqrt(b2));
}

}  // namespace

TEST_CASE("assembled gradient matrix reproduces the stencil") {
    Grid g(11, 7, 0.4);
    SparseMatrix G = assemble_grad_matrix(g);
    REQUIRE(G.rows() == 2 * g.size());
    REQUIRE(G.cols() == g.size());

    ScalarField u(g);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (double& v : u.values) v = d(rng);

    auto gu = G.multiply(u.values);
    VectorField ref = grad(u);
    for (int k = 0; k < g.size(); ++k) {
        CHECK(std::abs(gu[static_cast<std::size_t>(k)] - ref.comp1[static_cast<std::size_t>(k)]) <= 1e-14);
        CHECK(std::abs(gu[static_cast<std::size_t>(g.size() + k)] -
                       ref.comp2[static_cast<std::size_t>(k)]) <= 1e-14);
    }
}

TEST_CASE("minus G^T is the divergence") {
    Grid g(6, 9, 0.8);
    SparseMatrix G = assemble_grad_matrix(g);
    VectorField p(g);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (double& v : p.comp1) v = d(rng);
    for (double& v : p.comp2) v = d(rng);

    std::vector<double> stacked(p.comp1);
    stacked.insert(stacked.end(), p.comp2.begin(), p.comp2.end());
    auto gtp = G.multiply_transpose(stacked);
    ScalarField ref = div(p);
    for (int k = 0; k < g.size(); ++k)
        CHECK(std::abs(-gtp[static_cast<std::size_t>(k)] - ref.values[static_cast<std::size_t>(k)]) <=
              1e-14);
}

TEST_CASE("direct solve meets the backward error contract") {
    Grid g(16, 16);
    SparseMatrix A = test_matrix(g, 0.5);
    auto b = random_vec(A.rows());

    SolveSettings s;
    s.tol_lin = 1e-12;
    LinearSolveReport report;
    auto x = solve_sparse(A, b, s, &report);
    CHECK(report.method == LinearMethod::direct);
    CHECK(report.iterations == 0);
    CHECK(report.backward_error <= 1e-12);
    CHECK(backward_error(A, x, b) <= 1e-12);
}

TEST_CASE("iterative solve meets the same contract") {
    Grid g(16, 16);
    SparseMatrix A = test_matrix(g, 0.5);
    auto b = random_vec(A.rows());

    SolveSettings s;
    s.method = LinearMethod::iterative;
    s.tol_lin = 1e-10;
    LinearSolveReport report;
    auto x = solve_sparse(A, b, s, &report);
    CHECK(report.method == LinearMethod::iterative);
    CHECK(report.backward_error <= 1e-10);
    CHECK(backward_error(A, x, b) <= 1e-10);
}

TEST_CASE("direct path is bitwise deterministic") {
    Grid g(12, 12);
    SparseMatrix A = test_matrix(g, 1e-6);  // poorly scaled shift, still SPD
    auto b = random_vec(A.rows());
    SolveSettings s;
    auto x1 = solve_sparse(A, b, s);
    auto x2 = solve_sparse(A, b, s);
    for (std::size_t k = 0; k < x1.size(); ++k) CHECK(x1[k] == x2[k]);
}

TEST_CASE("structurally singular system raises SolveError") {
    std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 2.0}};  // row and column 2 empty
    SparseMatrix A = SparseMatrix::from_triplets(3, 3, t);
    std::vector<double> b{1.0, 1.0, 1.0};
    SolveSettings s;
    CHECK_THROWS_AS((void)solve_sparse(A, b, s), SolveError);
}
