#include "tvwf/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace tvwf {
namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& m) {
    Eigen::SparseMatrix<double> e(m.rows(), m.cols());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(m.nnz()));
    const auto offsets = m.row_offsets();
    const auto cols = m.col_indices();
    const auto vals = m.values();
    for (int r = 0; r < m.rows(); ++r)
        for (int k = offsets[static_cast<std::size_t>(r)]; k < offsets[static_cast<std::size_t>(r) + 1]; ++k)
            trips.emplace_back(r, cols[static_cast<std::size_t>(k)], vals[static_cast<std::size_t>(k)]);
    e.setFromTriplets(trips.begin(), trips.end());
    e.makeCompressed();
    return e;
}

double norm_inf_rows(const SparseMatrix& A) {
    const auto offsets = A.row_offsets();
    const auto vals = A.values();
    double n = 0.0;
    for (int r = 0; r < A.rows(); ++r) {
        double row = 0.0;
        for (int k = offsets[static_cast<std::size_t>(r)];
             k < offsets[static_cast<std::size_t>(r) + 1]; ++k)
            row += std::abs(vals[static_cast<std::size_t>(k)]);
        n = std::max(n, row);
    }
    return n;
}

double backward_error(const SparseMatrix& A, std::span<const double> b,
                      std::span<const double> x) {
    const std::vector<double> ax = A.multiply(x);
    double rr = 0.0, bb = 0.0, xx = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const double d = ax[k] - b[k];
        rr += d * d;
        bb += b[k] * b[k];
        xx += x[k] * x[k];
    }
    const double denom = norm_inf_rows(A) * std::sqrt(xx) + std::sqrt(bb);
    return denom > 0.0 ? std::sqrt(rr) / denom : std::sqrt(rr);
}

}  // namespace

std::vector<double> solve_sparse(const SparseMatrix& A, std::span<const double> b,
                                 const SolveSettings& settings, LinearSolveReport* report) {
    if (A.rows() != A.cols()) throw Error("solve_sparse: matrix must be square");
    if (static_cast<int>(b.size()) != A.rows()) throw Error("solve_sparse: rhs size mismatch");

    const Eigen::SparseMatrix<double> ae = to_eigen(A);
    const Eigen::Map<const Eigen::VectorXd> be(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd xe;
    int iterations = 0;

    if (settings.method == LinearMethod::direct) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(ae);
        if (lu.info() != Eigen::Success)
            throw SolveError("solve_sparse: LU factorization failed (singular or unstable matrix)",
                             std::numeric_limits<double>::infinity());
        xe = lu.solve(be);
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
        krylov.setTolerance(settings.tol_lin * 1e-2);  // headroom: Eigen tracks a different norm
        krylov.setMaxIterations(settings.max_iterations > 0 ? settings.max_iterations : 4 * A.rows());
        krylov.compute(ae);
        if (krylov.info() != Eigen::Success)
            throw SolveError("solve_sparse: preconditioner setup failed",
                             std::numeric_limits<double>::infinity());
        xe = krylov.solve(be);
        iterations = static_cast<int>(krylov.iterations());
    }

    std::vector<double> x(xe.data(), xe.data() + xe.size());
    for (double v : x)
        if (!std::isfinite(v))
            throw SolveError("solve_sparse: solution contains NaN or Inf",
                             std::numeric_limits<double>::infinity());

    const double err = backward_error(A, b, x);
    if (err > settings.tol_lin)
        throw SolveError("solve_sparse: backward error above tol_lin", err);
    if (report) *report = LinearSolveReport{iterations, err, settings.method};
    return x;
}

SparseMatrix assemble_grad_matrix(const Grid& grid) {
    const int n = grid.size();
    const double inv_h = 1.0 / grid.h;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(4 * n));
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const int k = grid.index(i, j);
            if (i < grid.nx - 1) {
                trips.push_back({k, k, -inv_h});
                trips.push_back({k, k + 1, inv_h});
            }
            if (j < grid.ny - 1) {
                trips.push_back({n + k, k, -inv_h});
                trips.push_back({n + k, k + grid.nx, inv_h});
            }
        }
    }
    return SparseMatrix::from_triplets(2 * n, n, trips);
}

}  // namespace tvwf
