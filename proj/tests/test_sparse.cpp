#include <random>
#include <vector>

#include "doctest.h"
#include "tvwf/sparse.hpp"

using namespace tvwf;

namespace {

std::mt19937_64 rng(42);

// dense mirror for cross-checking the CSR arithmetic
struct Dense {
    int rows, cols;
    std::vector<double> a;
    Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

std::pair<SparseMatrix, Dense> random_pair(int rows, int cols, double density = 0.3) {
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::bernoulli_distribution keep(density);
    std::vector<Triplet> t;
    Dense d(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (keep(rng)) {
                double v = val(rng);
                t.push_back({i, j, v});
                d.at(i, j) += v;
            }
    return {SparseMatrix::from_triplets(rows, cols, t), std::move(d)};
}

std::vector<double> random_vec(int n) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = val(rng);
    return x;
}

void check_equal(const SparseMatrix& s, const Dense& d, double tol = 1e-13) {
    REQUIRE(s.rows() == d.rows);
    REQUIRE(s.cols() == d.cols);
    for (int i = 0; i < d.rows; ++i)
        for (int j = 0; j < d.cols; ++j) CHECK(s.coeff(i, j) == doctest::Approx(d.at(i, j)).epsilon(tol));
}

}  // namespace

TEST_CASE("from_triplets sums duplicates and sorts columns") {
    std::vector<Triplet> t{{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {1, 1, -1.0}};
    SparseMatrix m = SparseMatrix::from_triplets(2, 3, t);
    CHECK(m.nnz() == 3);
    CHECK(m.coeff(0, 2) == 1.5);
    CHECK(m.coeff(0, 0) == 2.0);
    CHECK(m.coeff(0, 1) == 0.0);
    CHECK(m.coeff(1, 1) == -1.0);
    auto cols = m.col_indices();
    CHECK(cols[0] < cols[1]);  // row 0 sorted
}

TEST_CASE("multiply and multiply_transpose match a dense mirror") {
    auto [s, d] = random_pair(17, 11);
    auto x = random_vec(11);
    auto y = random_vec(17);

    auto ax = s.multiply(x);
    for (int i = 0; i < 17; ++i) {
        double ref = 0.0;
        for (int j = 0; j < 11; ++j) ref += d.at(i, j) * x[static_cast<std::size_t>(j)];
        CHECK(ax[static_cast<std::size_t>(i)] == doctest::Approx(ref).epsilon(1e-13));
    }
    auto aty = s.multiply_transpose(y);
    for (int j = 0; j < 11; ++j) {
        double ref = 0.0;
        for (int i = 0; i < 17; ++i) ref += d.at(i, j) * y[static_cast<std::size_t>(i)];
        CHECK(aty[static_cast<std::size_t>(j)] == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("transpose round trip and coefficients") {
    auto [s, d] = random_pair(9, 13);
    SparseMatrix st = s.transpose();
    REQUIRE(st.rows() == 13);
    REQUIRE(st.cols() == 9);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 13; ++j) CHECK(st.coeff(j, i) == s.coeff(i, j));
}

TEST_CASE("sparse-sparse product matches dense") {
    auto [a, da] = random_pair(8, 12);
    auto [b, db] = random_pair(12, 6);
    SparseMatrix c = a.multiply(b);
    Dense dc(8, 6);
    for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 12; ++k)
            for (int j = 0; j < 6; ++j) dc.at(i, j) += da.at(i, k) * db.at(k, j);
    check_equal(c, dc);
}

TEST_CASE("scaled_rows, plus_scaled_identity, plus") {
    auto [a, da] = random_pair(7, 7);
    auto dvec = random_vec(7);

    SparseMatrix sr = a.scaled_rows(dvec);
    Dense dsr(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) dsr.at(i, j) = dvec[static_cast<std::size_t>(i)] * da.at(i, j);
    check_equal(sr, dsr);

    SparseMatrix si = a.plus_scaled_identity(3.5);
    Dense dsi = da;
    for (int i = 0; i < 7; ++i) dsi.at(i, i) += 3.5;
    check_equal(si, dsi);

    auto [b, db] = random_pair(7, 7);
    SparseMatrix sp = a.plus(b, -2.0);
    Dense dsp(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) dsp.at(i, j) = da.at(i, j) - 2.0 * db.at(i, j);
    check_equal(sp, dsp);
}

TEST_CASE("identity builds diag(scale)") {
    SparseMatrix i = SparseMatrix::identity(4, 2.5);
    CHECK(i.nnz() == 4);
    for (int k = 0; k < 4; ++k) CHECK(i.coeff(k, k) == 2.5);
    CHECK(i.coeff(0, 1) == 0.0);
}
