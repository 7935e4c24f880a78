#include "tvwf/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tvwf {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets) {
    if (rows < 0 || cols < 0) throw Error("SparseMatrix: negative dimension");
    SparseMatrix m;
    m.n_rows_ = rows;
    m.n_cols_ = cols;
    m.row_offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);

    for (const Triplet& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw Error("SparseMatrix: triplet index out of range");
        if (!std::isfinite(t.value)) throw Error("SparseMatrix: non-finite triplet value");
        ++m.row_offsets_[static_cast<std::size_t>(t.row) + 1];
    }
    std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());

    const std::size_t nnz = static_cast<std::size_t>(m.row_offsets_.back());
    m.col_indices_.resize(nnz);
    m.values_.resize(nnz);
    std::vector<int> fill(m.row_offsets_.begin(), m.row_offsets_.end() - 1);
    for (const Triplet& t : triplets) {
        const int slot = fill[static_cast<std::size_t>(t.row)]++;
        m.col_indices_[static_cast<std::size_t>(slot)] = t.col;
        m.values_[static_cast<std::size_t>(slot)] = t.value;
    }

    // Sort each row and merge duplicates in place.
    std::vector<int> perm;
    std::vector<int> sorted_cols;
    std::vector<double> sorted_vals;
    std::vector<int> new_offsets(m.row_offsets_.size(), 0);
    sorted_cols.reserve(nnz);
    sorted_vals.reserve(nnz);
    for (int r = 0; r < rows; ++r) {
        const int begin = m.row_offsets_[static_cast<std::size_t>(r)];
        const int end = m.row_offsets_[static_cast<std::size_t>(r) + 1];
        perm.resize(static_cast<std::size_t>(end - begin));
        std::iota(perm.begin(), perm.end(), begin);
        std::sort(perm.begin(), perm.end(), [&](int a, int b) {
            return m.col_indices_[static_cast<std::size_t>(a)] <
                   m.col_indices_[static_cast<std::size_t>(b)];
        });
        for (int p : perm) {
            const int c = m.col_indices_[static_cast<std::size_t>(p)];
            const double v = m.values_[static_cast<std::size_t>(p)];
            if (!sorted_cols.empty() &&
                static_cast<int>(sorted_cols.size()) > new_offsets[static_cast<std::size_t>(r)] &&
                sorted_cols.back() == c) {
                sorted_vals.back() += v;
            } else {
                sorted_cols.push_back(c);
                sorted_vals.push_back(v);
            }
        }
        new_offsets[static_cast<std::size_t>(r) + 1] = static_cast<int>(sorted_cols.size());
    }
    m.col_indices_ = std::move(sorted_cols);
    m.values_ = std::move(sorted_vals);
    m.row_offsets_ = std::move(new_offsets);
    return m;
}

SparseMatrix SparseMatrix::identity(int n, double scale) {
    SparseMatrix m;
    m.n_rows_ = n;
    m.n_cols_ = n;
    m.row_offsets_.resize(static_cast<std::size_t>(n) + 1);
    m.col_indices_.resize(static_cast<std::size_t>(n));
    m.values_.assign(static_cast<std::size_t>(n), scale);
    for (int i = 0; i <= n; ++i) m.row_offsets_[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n; ++i) m.col_indices_[static_cast<std::size_t>(i)] = i;
    return m;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_cols_) throw Error("SparseMatrix::multiply: size mismatch");
    std::vector<double> y(static_cast<std::size_t>(n_rows_), 0.0);
    for (int r = 0; r < n_rows_; ++r) {
        double acc = 0.0;
        for (int k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
            acc += values_[static_cast<std::size_t>(k)] *
                   x[static_cast<std::size_t>(col_indices_[static_cast<std::size_t>(k)])];
        y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
}

std::vector<double> SparseMatrix::multiply_transpose(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_rows_)
        throw Error("SparseMatrix::multiply_transpose: size mismatch");
    std::vector<double> y(static_cast<std::size_t>(n_cols_), 0.0);
    for (int r = 0; r < n_rows_; ++r) {
        const double xr = x[static_cast<std::size_t>(r)];
        if (xr == 0.0) continue;
        for (int k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
            y[static_cast<std::size_t>(col_indices_[static_cast<std::size_t>(k)])] +=
                values_[static_cast<std::size_t>(k)] * xr;
    }
    return y;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t;
    t.n_rows_ = n_cols_;
    t.n_cols_ = n_rows_;
    t.row_offsets_.assign(static_cast<std::size_t>(n_cols_) + 1, 0);
    for (int c : col_indices_) ++t.row_offsets_[static_cast<std::size_t>(c) + 1];
    std::partial_sum(t.row_offsets_.begin(), t.row_offsets_.end(), t.row_offsets_.begin());
    t.col_indices_.resize(values_.size());
    t.values_.resize(values_.size());
    std::vector<int> fill(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
    for (int r = 0; r < n_rows_; ++r) {
        for (int k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = col_indices_[static_cast<std::size_t>(k)];
            const int slot = fill[static_cast<std::size_t>(c)]++;
            t.col_indices_[static_cast<std::size_t>(slot)] = r;
            t.values_[static_cast<std::size_t>(slot)] = values_[static_cast<std::size_t>(k)];
        }
    }
    return t;  // columns within each row come out sorted because rows were scanned in order
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& other) const {
    if (n_cols_ != other.n_rows_) throw Error("SparseMatrix::multiply: shape mismatch");
    SparseMatrix out;
    out.n_rows_ = n_rows_;
    out.n_cols_ = other.n_cols_;
    out.row_offsets_.assign(static_cast<std::size_t>(n_rows_) + 1, 0);

    // Gustavson's algorithm with a dense accumulator per row.
    std::vector<double> acc(static_cast<std::size_t>(other.n_cols_), 0.0);
    std::vector<int> marker(static_cast<std::size_t>(other.n_cols_), -1);
    std::vector<int> row_cols;
    for (int r = 0; r < n_rows_; ++r) {
        row_cols.clear();
        for (int ka = row_offsets_[static_cast<std::size_t>(r)];
             ka < row_offsets_[static_cast<std::size_t>(r) + 1]; ++ka) {
            const int c = col_indices_[static_cast<std::size_t>(ka)];
            const double va = values_[static_cast<std::size_t>(ka)];
            for (int kb = other.row_offsets_[static_cast<std::size_t>(c)];
                 kb < other.row_offsets_[static_cast<std::size_t>(c) + 1]; ++kb) {
                const int cb = other.col_indices_[static_cast<std::size_t>(kb)];
                if (marker[static_cast<std::size_t>(cb)] != r) {
                    marker[static_cast<std::size_t>(cb)] = r;
                    acc[static_cast<std::size_t>(cb)] = 0.0;
                    row_cols.push_back(cb);
                }
                acc[static_cast<std::size_t>(cb)] += va * other.values_[static_cast<std::size_t>(kb)];
            }
        }
        std::sort(row_cols.begin(), row_cols.end());
        for (int cb : row_cols) {
            out.col_indices_.push_back(cb);
            out.values_.push_back(acc[static_cast<std::size_t>(cb)]);
        }
        out.row_offsets_[static_cast<std::size_t>(r) + 1] = static_cast<int>(out.col_indices_.size());
    }
    return out;
}

SparseMatrix SparseMatrix::scaled_rows(std::span<const double> d) const {
    if (static_cast<int>(d.size()) != n_rows_) throw Error("SparseMatrix::scaled_rows: size mismatch");
    SparseMatrix out = *this;
    for (int r = 0; r < n_rows_; ++r) {
        const double s = d[static_cast<std::size_t>(r)];
        for (int k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
            out.values_[static_cast<std::size_t>(k)] *= s;
    }
    return out;
}

SparseMatrix SparseMatrix::plus_scaled_identity(double c) const {
    if (n_rows_ != n_cols_) throw Error("plus_scaled_identity: matrix not square");
    return plus(identity(n_rows_, c));
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other, double scale) const {
    if (n_rows_ != other.n_rows_ || n_cols_ != other.n_cols_)
        throw Error("SparseMatrix::plus: shape mismatch");
    SparseMatrix out;
    out.n_rows_ = n_rows_;
    out.n_cols_ = n_cols_;
    out.row_offsets_.assign(static_cast<std::size_t>(n_rows_) + 1, 0);
    for (int r = 0; r < n_rows_; ++r) {
        int ka = row_offsets_[static_cast<std::size_t>(r)];
        const int ka_end = row_offsets_[static_cast<std::size_t>(r) + 1];
        int kb = other.row_offsets_[static_cast<std::size_t>(r)];
        const int kb_end = other.row_offsets_[static_cast<std::size_t>(r) + 1];
        while (ka < ka_end || kb < kb_end) {
            int col;
            double val;
            const int ca = ka < ka_end ? col_indices_[static_cast<std::size_t>(ka)] : n_cols_;
            const int cb = kb < kb_end ? other.col_indices_[static_cast<std::size_t>(kb)] : n_cols_;
            if (ca < cb) {
                col = ca;
                val = values_[static_cast<std::size_t>(ka++)];
            } else if (cb < ca) {
                col = cb;
                val = scale * other.values_[static_cast<std::size_t>(kb++)];
            } else {
                col = ca;
                val = values_[static_cast<std::size_t>(ka++)] +
                      scale * other.values_[static_cast<std::size_t>(kb++)];
            }
            out.col_indices_.push_back(col);
            out.values_.push_back(val);
        }
        out.row_offsets_[static_cast<std::size_t>(r) + 1] = static_cast<int>(out.col_indices_.size());
    }
    return out;
}

double SparseMatrix::coeff(int row, int col) const {
    if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_)
        throw Error("SparseMatrix::coeff: index out of range");
    for (int k = row_offsets_[static_cast<std::size_t>(row)];
         k < row_offsets_[static_cast<std::size_t>(row) + 1]; ++k)
        if (col_indices_[static_cast<std::size_t>(k)] == col)
            return values_[static_cast<std::size_t>(k)];
    return 0.0;
}

}  // namespace tvwf
