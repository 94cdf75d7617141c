#include "mcca/sparse.hpp"

#include <algorithm>
#include <map>

namespace mcca {

namespace {

using Work = std::map<std::uint32_t, Rational>;

Work to_work(const SparseVector& v)
{
    Work w;
    for (const auto& e : v)
        w.emplace_hint(w.end(), e.index, e.value);
    return w;
}

SparseVector from_work(const Work& w)
{
    SparseVector v;
    v.reserve(w.size());
    for (const auto& [i, x] : w)
        v.push_back(SparseEntry{i, x});
    return v;
}

// w -= c * row
void subtract(Work& w, const Rational& c, const SparseVector& row)
{
    for (const auto& e : row) {
        auto [it, inserted] = w.try_emplace(e.index);
        it->second -= c * e.value;
        if (it->second == 0)
            w.erase(it);
    }
}

}  // namespace

SparseVector make_sparse(const std::vector<Rational>& dense)
{
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0)
            v.push_back(SparseEntry{static_cast<std::uint32_t>(i), dense[i]});
    return v;
}

std::vector<Rational> make_dense(const SparseVector& v, std::size_t size)
{
    std::vector<Rational> d(size);
    for (const auto& e : v) {
        if (e.index >= size)
            throw Error("sparse vector index out of range");
        d[e.index] = e.value;
    }
    return d;
}

SparseVector unit_vector(std::uint32_t index) { return SparseVector{SparseEntry{index, Rational(1)}}; }

void scale(SparseVector& v, const Rational& c)
{
    if (c == 0) {
        v.clear();
        return;
    }
    for (auto& e : v)
        e.value *= c;
}

SparseVector axpy(const SparseVector& a, const Rational& c, const SparseVector& b)
{
    SparseVector out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
            out.push_back(a[i++]);
        }
        else if (i == a.size() || b[j].index < a[i].index) {
            Rational x = c * b[j].value;
            if (x != 0)
                out.push_back(SparseEntry{b[j].index, std::move(x)});
            ++j;
        }
        else {
            Rational x = a[i].value + c * b[j].value;
            if (x != 0)
                out.push_back(SparseEntry{a[i].index, std::move(x)});
            ++i;
            ++j;
        }
    }
    return out;
}

RationalMatrix SparseMatrix::to_dense() const
{
    RationalMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& e : columns[j])
            m(e.index, j) = e.value;
    return m;
}

SparseMatrix SparseMatrix::from_dense(const RationalMatrix& m)
{
    SparseMatrix s;
    s.rows = m.rows();
    for (std::size_t j = 0; j < m.cols(); ++j)
        s.columns.push_back(make_sparse(m.column(j)));
    return s;
}

SparseVector SparseMatrix::apply(const SparseVector& x) const
{
    Work w;
    for (const auto& e : x) {
        if (e.index >= columns.size())
            throw Error("sparse matrix-vector dimension mismatch");
        for (const auto& c : columns[e.index]) {
            auto [it, inserted] = w.try_emplace(c.index);
            it->second += e.value * c.value;
            if (it->second == 0)
                w.erase(it);
        }
    }
    return from_work(w);
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.cols() != b.rows)
        throw Error("sparse matrix product dimension mismatch");
    SparseMatrix c;
    c.rows = a.rows;
    c.columns.reserve(b.cols());
    for (const auto& col : b.columns)
        c.columns.push_back(a.apply(col));
    return c;
}

std::size_t rank(const SparseMatrix& m)
{
    Echelon e;
    for (const auto& col : m.columns)
        e.insert(col);
    return e.size();
}

std::optional<std::size_t> Echelon::row_with_pivot(std::uint32_t index, std::size_t limit) const
{
    auto it = pivot_row_.find(index);
    if (it == pivot_row_.end() || it->second >= limit)
        return std::nullopt;
    return it->second;
}

SparseVector Echelon::reduce(const SparseVector& v, std::size_t limit,
                             std::vector<std::pair<std::size_t, Rational>>* used) const
{
    if (used)
        used->clear();
    if (rows_.empty() || limit == 0)
        return v;
    Work w = to_work(v);
    auto it = w.begin();
    while (it != w.end()) {
        const std::uint32_t idx = it->first;
        auto r = row_with_pivot(idx, limit);
        if (!r) {
            ++it;
            continue;
        }
        const Rational c = it->second;
        subtract(w, c, rows_[*r]);
        if (used)
            used->emplace_back(*r, c);
        it = w.upper_bound(idx);
    }
    return from_work(w);
}

std::optional<std::size_t> Echelon::insert(const SparseVector& v)
{
    Work w = to_work(v);
    while (!w.empty()) {
        auto r = row_with_pivot(w.begin()->first);
        if (!r)
            break;
        const Rational c = w.begin()->second;
        subtract(w, c, rows_[*r]);
    }
    if (w.empty())
        return std::nullopt;
    return push_row(from_work(w));
}

std::size_t Echelon::push_row(SparseVector v)
{
    if (v.empty())
        throw Error("echelon: cannot push a zero row");
    if (pivot_row_.count(v.front().index))
        throw Error("echelon: leading index already used");
    if (v.front().value != 1)
        scale(v, 1 / Rational(v.front().value));
    const std::size_t r = rows_.size();
    pivot_row_.emplace(v.front().index, r);
    rows_.push_back(std::move(v));
    return r;
}

std::optional<SparseVector> ColumnReduction::preimage(const SparseVector& target, std::size_t row_limit) const
{
    std::vector<std::pair<std::size_t, Rational>> used;
    if (!image.reduce(target, row_limit, &used).empty())
        return std::nullopt;
    Work x;
    for (const auto& [r, c] : used)
        subtract(x, -c, image_tags[r]);
    return from_work(x);
}

ColumnReduction reduce_columns(const std::vector<SparseVector>& columns, std::size_t prefix)
{
    ColumnReduction out;
    out.prefix = std::min(prefix, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j == out.prefix) {
            out.image_prefix_rank = out.image.size();
            out.kernel_prefix_size = out.kernel.size();
        }
        const auto col_index = static_cast<std::uint32_t>(j);
        if (columns[j].empty()) {
            out.kernel.push_back(unit_vector(col_index));
            continue;
        }
        Work w = to_work(columns[j]);
        Work tag;
        tag.emplace(col_index, Rational(1));
        while (!w.empty()) {
            auto r = out.image.row_with_pivot(w.begin()->first);
            if (!r)
                break;
            const Rational c = w.begin()->second;
            subtract(w, c, out.image.row(*r));
            subtract(tag, c, out.image_tags[*r]);
        }
        if (w.empty()) {
            out.kernel.push_back(from_work(tag));
            continue;
        }
        const Rational lead = w.begin()->second;
        SparseVector row = from_work(w);
        SparseVector t = from_work(tag);
        if (lead != 1) {
            const Rational inv = 1 / lead;
            scale(row, inv);
            scale(t, inv);
        }
        out.image.push_row(std::move(row));
        out.image_tags.push_back(std::move(t));
    }
    if (out.prefix == columns.size()) {
        out.image_prefix_rank = out.image.size();
        out.kernel_prefix_size = out.kernel.size();
    }
    return out;
}

}  // namespace mcca
