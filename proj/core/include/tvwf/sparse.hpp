// Minimal CSR sparse matrix: row offsets, sorted column indices, values.
// Covers exactly what the reduced Newton system needs (triplet assembly,
// products, transpose, diagonal scaling); factorization lives behind
// solve_sparse in linear_solver.hpp.
#pragma once

#include <span>
#include <vector>

#include "tvwf/errors.hpp"

namespace tvwf {

struct Triplet {
    int row;
    int col;
    double value;
};

class SparseMatrix {
public:
    SparseMatrix() = default;

    // Duplicate triplets are summed. Column indices come out sorted per row.
    static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);
    static SparseMatrix identity(int n, double scale = 1.0);

    int rows() const { return n_rows_; }
    int cols() const { return n_cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    std::span<const int> row_offsets() const { return row_offsets_; }
    std::span<const int> col_indices() const { return col_indices_; }
    std::span<const double> values() const { return values_; }

    std::vector<double> multiply(std::span<const double> x) const;            // A x
    std::vector<double> multiply_transpose(std::span<const double> x) const;  // A^T x

    SparseMatrix transpose() const;
    SparseMatrix multiply(const SparseMatrix& other) const;  // A * B
    SparseMatrix scaled_rows(std::span<const double> d) const;  // diag(d) * A
    SparseMatrix plus_scaled_identity(double c) const;           // A + c I (square only)
    SparseMatrix plus(const SparseMatrix& other, double scale = 1.0) const;  // A + scale*B

    double coeff(int row, int col) const;  // 0 if not stored

private:
    int n_rows_ = 0;
    int n_cols_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> col_indices_;
    std::vector<double> values_;
};

}  // namespace tvwf
