#pragma once

// Exact linear algebra over Q, Z and F2. Dense and small; the sparse engine used
// for degree-wise cochain complexes lives in sparse.hpp.

#include "mcca/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mcca {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data))
    {
        if (data_.size() != rows * cols)
            throw Error("matrix data has wrong size");
    }
    static Matrix from_rows(const std::vector<std::vector<T>>& rows)
    {
        Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw Error("ragged matrix rows");
            for (std::size_t j = 0; j < m.cols_; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> column(std::size_t j) const
    {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            c[i] = (*this)(i, j);
        return c;
    }
    void set_column(std::size_t j, const std::vector<T>& c)
    {
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, j) = c.at(i);
    }

    bool is_zero() const
    {
        for (const T& x : data_)
            if (x != 0)
                return false;
        return true;
    }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw Error("matrix product dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x)
    {
        if (a.cols_ != x.size())
            throw Error("matrix-vector dimension mismatch");
        std::vector<T> y(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                if (x[j] != 0)
                    y[i] += a(i, j) * x[j];
        return y;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<Integer>;

struct RrefResult {
    RationalMatrix reduced;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
    std::size_t rank = 0;
};

/// Reduced row-echelon form with leftmost-first pivoting.
RrefResult rref(const RationalMatrix& m);
std::size_t rank(const RationalMatrix& m);

/// Kernel basis: one vector per free column, with that column set to 1.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m);

/// Particular solution of m x = b with free variables set to zero; nullopt if inconsistent.
std::optional<std::vector<Rational>> solve(const RationalMatrix& m, const std::vector<Rational>& b);

/// Inverse of a square matrix; nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

struct SmithForm {
    IntegerMatrix diagonal;  // S
    IntegerMatrix left;      // U, unimodular
    IntegerMatrix right;     // V, unimodular
    std::size_t rank = 0;
};

/// U * m * V = S with S diagonal, non-negative, d1 | d2 | ... .
SmithForm smith_normal_form(const IntegerMatrix& m);

/// Determinant by fraction-free elimination (used to audit unimodularity).
Integer determinant(const IntegerMatrix& m);

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool get(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { bits_[i * cols_ + j] = v ? 1 : 0; }
    void flip(std::size_t i, std::size_t j) { bits_[i * cols_ + j] ^= 1; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

using BitVector = std::vector<std::uint8_t>;

std::size_t rank_f2(const BitMatrix& m);
std::vector<BitVector> nullspace_f2(const BitMatrix& m);
/// Particular solution of m x = b over F2 with free variables zero.
std::optional<BitVector> solve_f2(const BitMatrix& m, const BitVector& b);

}  // namespace mcca
