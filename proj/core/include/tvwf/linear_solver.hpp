// Sparse linear solution for the reduced Newton system.
//
// The direct path is a sparse LU factorization and is bitwise deterministic;
// the iterative path is ILU-preconditioned BiCGSTAB for grids where a direct
// factorization gets too expensive. Both enforce the same accuracy contract
// on the normwise backward error
//
//   ||A x - b||_2 / (||A||_inf ||x||_2 + ||b||_2) <= tol_lin,
//
// which stays meaningful when the damping floor inflates ||A|| by many orders
// of magnitude. A SolveError carrying the achieved value is thrown otherwise.
#pragma once

#include <span>
#include <vector>

#include "tvwf/field.hpp"
#include "tvwf/sparse.hpp"

namespace tvwf {

enum class LinearMethod { direct, iterative };

struct SolveSettings {
    LinearMethod method = LinearMethod::direct;
    double tol_lin = 1e-10;
    int max_iterations = 0;  // iterative path only; 0 picks 4*n
};

struct LinearSolveReport {
    int iterations = 0;  // 0 for the direct path
    double backward_error = 0.0;
    LinearMethod method = LinearMethod::direct;
};

std::vector<double> solve_sparse(const SparseMatrix& A, std::span<const double> b,
                                 const SolveSettings& settings, LinearSolveReport* report = nullptr);

// Matrix G of shape (2 nx ny) x (nx ny) with G u = grad(u) flattened, comp1
// rows first. div is -G^T, which makes the adjointness structural.
SparseMatrix assemble_grad_matrix(const Grid& grid);

}  // namespace tvwf
