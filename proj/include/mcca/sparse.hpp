#pragma once

// Sparse exact elimination for the large, very sparse coboundary matrices of
// degree-wise cochain complexes (tens of thousands of monomials, a handful of
// nonzeros per column).

#include "mcca/linalg.hpp"
#include "mcca/rational.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mcca {

struct SparseEntry {
    std::uint32_t index = 0;
    Rational value;
    bool operator==(const SparseEntry&) const = default;
};

/// Entries sorted by index, no zeros.
using SparseVector = std::vector<SparseEntry>;

SparseVector make_sparse(const std::vector<Rational>& dense);
std::vector<Rational> make_dense(const SparseVector& v, std::size_t size);
SparseVector unit_vector(std::uint32_t index);
void scale(SparseVector& v, const Rational& c);
/// a + c * b
SparseVector axpy(const SparseVector& a, const Rational& c, const SparseVector& b);

/// Column-major sparse matrix.
struct SparseMatrix {
    std::size_t rows = 0;
    std::vector<SparseVector> columns;

    std::size_t cols() const { return columns.size(); }
    RationalMatrix to_dense() const;
    static SparseMatrix from_dense(const RationalMatrix& m);
    SparseVector apply(const SparseVector& x) const;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
std::size_t rank(const SparseMatrix& m);

/// Rows with pairwise distinct leading indices, each scaled to leading value 1.
/// Reducing a vector against the first `limit` rows eliminates every entry that
/// sits on one of their leading indices, so the residual is a canonical
/// representative modulo their span.
class Echelon {
public:
    static constexpr std::size_t all = std::numeric_limits<std::size_t>::max();

    std::size_t size() const { return rows_.size(); }
    const SparseVector& row(std::size_t r) const { return rows_[r]; }
    std::optional<std::size_t> row_with_pivot(std::uint32_t index, std::size_t limit = all) const;

    /// Full reduction modulo rows [0, limit). When `used` is given, receives the
    /// (row, coefficient) pairs with v = residual + sum coefficient * row.
    SparseVector reduce(const SparseVector& v, std::size_t limit = all,
                        std::vector<std::pair<std::size_t, Rational>>* used = nullptr) const;

    bool contains(const SparseVector& v, std::size_t limit = all) const { return reduce(v, limit).empty(); }

    /// Appends the residual of v (leading-term reduction) when it is nonzero.
    /// Returns the new row index, or nullopt when v lies in the span.
    std::optional<std::size_t> insert(const SparseVector& v);

    /// Appends a row whose leading index is not yet a pivot (scaled to lead 1).
    std::size_t push_row(SparseVector v);

private:
    std::vector<SparseVector> rows_;
    std::unordered_map<std::uint32_t, std::size_t> pivot_row_;
};

/// Column-by-column elimination of a linear map given by its columns.
/// Produces an echelon basis of the image (with, for each row, the combination
/// of columns mapping onto it) and a basis of the kernel. Kernel vectors found
/// before column `prefix` span the kernel of the map restricted to the first
/// `prefix` columns, and image rows before `image_prefix_rank` span the image
/// of those columns.
struct ColumnReduction {
    Echelon image;
    std::vector<SparseVector> image_tags;  // over column positions
    std::vector<SparseVector> kernel;      // over column positions
    std::size_t prefix = 0;
    std::size_t image_prefix_rank = 0;
    std::size_t kernel_prefix_size = 0;

    std::size_t rank() const { return image.size(); }

    /// Some x (a combination of pivot columns only) with map(x) = target, using
    /// only the first `row_limit` image rows; nullopt when none exists.
    std::optional<SparseVector> preimage(const SparseVector& target, std::size_t row_limit = Echelon::all) const;
};

ColumnReduction reduce_columns(const std::vector<SparseVector>& columns, std::size_t prefix);

}  // namespace mcca
