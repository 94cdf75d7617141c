#include "mcca/linalg.hpp"

#include <algorithm>
#include <utility>

namespace mcca {

RrefResult rref(const RationalMatrix& m)
{
    RrefResult r{m, {}, 0};
    RationalMatrix& a = r.reduced;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t p = row;
        while (p < rows && a(p, col) == 0)
            ++p;
        if (p == rows)
            continue;
        if (p != row)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(a(p, j), a(row, j));
        const Rational inv = 1 / a(row, col);
        for (std::size_t j = col; j < cols; ++j)
            a(row, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || a(i, col) == 0)
                continue;
            const Rational f = a(i, col);
            for (std::size_t j = col; j < cols; ++j)
                if (a(row, j) != 0)
                    a(i, j) -= f * a(row, j);
        }
        r.pivots.push_back(col);
        ++row;
    }
    r.rank = row;
    return r;
}

std::size_t rank(const RationalMatrix& m) { return rref(m).rank; }

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m)
{
    const RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : r.pivots)
        is_pivot[p] = true;
    std::vector<std::vector<Rational>> out;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rational> v(m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < r.rank; ++i)
            v[r.pivots[i]] = -r.reduced(i, free);
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<std::vector<Rational>> solve(const RationalMatrix& m, const std::vector<Rational>& b)
{
    if (b.size() != m.rows())
        throw Error("solve: right-hand side has wrong length");
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    const RrefResult r = rref(aug);
    if (!r.pivots.empty() && r.pivots.back() == m.cols())
        return std::nullopt;
    std::vector<Rational> x(m.cols());
    for (std::size_t i = 0; i < r.rank; ++i)
        x[r.pivots[i]] = r.reduced(i, m.cols());
    return x;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m)
{
    if (m.rows() != m.cols())
        throw Error("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    const RrefResult r = rref(aug);
    if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1))
        return std::nullopt;
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = r.reduced(i, n + j);
    return inv;
}

namespace {

void swap_rows(IntegerMatrix& a, std::size_t i, std::size_t j)
{
    if (i != j)
        for (std::size_t c = 0; c < a.cols(); ++c)
            std::swap(a(i, c), a(j, c));
}

void swap_cols(IntegerMatrix& a, std::size_t i, std::size_t j)
{
    if (i != j)
        for (std::size_t r = 0; r < a.rows(); ++r)
            std::swap(a(r, i), a(r, j));
}

// row_i += f * row_j
void add_row(IntegerMatrix& a, std::size_t i, std::size_t j, const Integer& f)
{
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (a(j, c) != 0)
            a(i, c) += f * a(j, c);
}

void add_col(IntegerMatrix& a, std::size_t i, std::size_t j, const Integer& f)
{
    for (std::size_t r = 0; r < a.rows(); ++r)
        if (a(r, j) != 0)
            a(r, i) += f * a(r, j);
}

void negate_row(IntegerMatrix& a, std::size_t i)
{
    for (std::size_t c = 0; c < a.cols(); ++c)
        a(i, c) = -a(i, c);
}

}  // namespace

namespace {

// Unimodular 2x2 step [[x, y], [-b/g, a/g]] with x a + y b = g; y = 0 when a | b,
// so the pivot line is left alone whenever it already divides.
struct GcdStep {
    Integer x, y, ag, bg;
};

GcdStep gcd_step(const Integer& a, const Integer& b)
{
    GcdStep st;
    if (b % a == 0) {
        st.x = 1;
        st.y = 0;
        st.ag = 1;
        st.bg = b / a;
        return st;
    }
    Integer g;
    mpz_gcdext(g.get_mpz_t(), st.x.get_mpz_t(), st.y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    st.ag = a / g;
    st.bg = b / g;
    return st;
}

// rows (p, q) <- [[x, y], [-b/g, a/g]] (rows p, q)
void combine_rows(IntegerMatrix& m, std::size_t p, std::size_t q, const GcdStep& st)
{
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const Integer rp = m(p, c), rq = m(q, c);
        m(p, c) = st.x * rp + st.y * rq;
        m(q, c) = st.ag * rq - st.bg * rp;
    }
}

void combine_cols(IntegerMatrix& m, std::size_t p, std::size_t q, const GcdStep& st)
{
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const Integer cp = m(r, p), cq = m(r, q);
        m(r, p) = st.x * cp + st.y * cq;
        m(r, q) = st.ag * cq - st.bg * cp;
    }
}

void add_col_multiple(IntegerMatrix& a, std::size_t i, std::size_t j, const Integer& f)
{
    for (std::size_t r = 0; r < a.rows(); ++r)
        if (a(r, j) != 0)
            a(r, i) += f * a(r, j);
}

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    SmithForm f{m, IntegerMatrix::identity(rows), IntegerMatrix::identity(cols), 0};
    IntegerMatrix& s = f.diagonal;
    IntegerMatrix& u = f.left;
    IntegerMatrix& v = f.right;

    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
        // Smallest nonzero entry in the remaining block becomes the pivot.
        bool found = false;
        std::size_t pi = 0, pj = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (s(i, j) != 0 && (!found || abs(s(i, j)) < abs(s(pi, pj)))) {
                    found = true;
                    pi = i;
                    pj = j;
                }
        if (!found)
            break;
        swap_rows(s, t, pi);
        swap_rows(u, t, pi);
        swap_cols(s, t, pj);
        swap_cols(v, t, pj);

        // Each pass either clears row and column t or shrinks |pivot|.
        for (bool dirty = true; dirty;) {
            dirty = false;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (s(i, t) == 0)
                    continue;
                const GcdStep st = gcd_step(s(t, t), s(i, t));
                combine_rows(s, t, i, st);
                combine_rows(u, t, i, st);
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (s(t, j) == 0)
                    continue;
                const GcdStep st = gcd_step(s(t, t), s(t, j));
                combine_cols(s, t, j, st);
                combine_cols(v, t, j, st);
            }
            for (std::size_t i = t + 1; i < rows && !dirty; ++i)
                dirty = s(i, t) != 0;
        }
    }
    f.rank = t;

    // Divisibility chain: diag(a, b) -> diag(gcd, lcm) where needed.
    for (bool again = true; again;) {
        again = false;
        for (std::size_t i = 0; i < f.rank; ++i)
            for (std::size_t j = i + 1; j < f.rank; ++j) {
                if (s(j, j) % s(i, i) == 0)
                    continue;
                add_row(s, i, j, Integer(1));
                add_row(u, i, j, Integer(1));
                const GcdStep st = gcd_step(s(i, i), s(i, j));
                combine_cols(s, i, j, st);
                combine_cols(v, i, j, st);
                const Integer q = s(j, i) / s(i, i);
                add_row(s, j, i, -q);
                add_row(u, j, i, -q);
                again = true;
            }
    }
    for (std::size_t i = 0; i < f.rank; ++i)
        if (s(i, i) < 0) {
            negate_row(s, i);
            negate_row(u, i);
        }
    // Shorten the kernel columns of V against each other (keeps V unimodular).
    for (bool shorter = true; shorter;) {
        shorter = false;
        auto norm = [&](std::size_t c) {
            Integer n = 0;
            for (std::size_t r = 0; r < cols; ++r)
                n += v(r, c) * v(r, c);
            return n;
        };
        for (std::size_t a = f.rank; a < cols; ++a)
            for (std::size_t b = f.rank; b < cols; ++b) {
                if (a == b)
                    continue;
                Integer dot = 0;
                for (std::size_t r = 0; r < cols; ++r)
                    dot += v(r, a) * v(r, b);
                const Integer nb = norm(b);
                if (nb == 0)
                    continue;
                // nearest integer to dot / nb
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), Integer(2 * dot + nb).get_mpz_t(), Integer(2 * nb).get_mpz_t());
                if (q == 0)
                    continue;
                const Integer before = norm(a);
                add_col_multiple(v, a, b, -q);
                if (norm(a) < before)
                    shorter = true;
                else
                    add_col_multiple(v, a, b, q);
            }
    }
    return f;
}

Integer determinant(const IntegerMatrix& m)
{
    if (m.rows() != m.cols())
        throw Error("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    IntegerMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != k) {
            swap_rows(a, p, k);
            sign = -sign;
        }
        // Bareiss step
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return n == 0 ? Integer(1) : sign * a(n - 1, n - 1);
}

namespace {

// Gauss-Jordan over F2 on a copy; returns pivot columns.
std::vector<std::size_t> reduce_f2(std::vector<BitVector>& rows, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && !rows[p][c])
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[p], rows[r]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i][c])
                for (std::size_t j = c; j < rows[i].size(); ++j)
                    rows[i][j] ^= rows[r][j];
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::vector<BitVector> to_rows(const BitMatrix& m, std::size_t extra = 0)
{
    std::vector<BitVector> rows(m.rows(), BitVector(m.cols() + extra, 0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            rows[i][j] = m.get(i, j) ? 1 : 0;
    return rows;
}

}  // namespace

std::size_t rank_f2(const BitMatrix& m)
{
    auto rows = to_rows(m);
    return reduce_f2(rows, m.cols()).size();
}

std::vector<BitVector> nullspace_f2(const BitMatrix& m)
{
    auto rows = to_rows(m);
    const auto pivots = reduce_f2(rows, m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : pivots)
        is_pivot[p] = true;
    std::vector<BitVector> out;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        BitVector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = rows[i][free];
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<BitVector> solve_f2(const BitMatrix& m, const BitVector& b)
{
    if (b.size() != m.rows())
        throw Error("solve_f2: right-hand side has wrong length");
    auto rows = to_rows(m, 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows[i][m.cols()] = b[i] & 1;
    const auto pivots = reduce_f2(rows, m.cols() + 1);
    if (!pivots.empty() && pivots.back() == m.cols())
        return std::nullopt;
    BitVector x(m.cols(), 0);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        x[pivots[i]] = rows[i][m.cols()];
    return x;
}

}  // namespace mcca
