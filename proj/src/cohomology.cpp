#include "mcca/cohomology.hpp"

#include "complex_cache.hpp"

#include <algorithm>

namespace mcca {

bool CohomologyClass::is_zero() const
{
    return std::all_of(coordinates.begin(), coordinates.end(), [](const Rational& q) { return q == 0; });
}

namespace detail {

int effective_cutoff(int k, int cutoff) { return cutoff >= k ? k : cutoff; }

const DegreeBasis& full_basis(const SullivanModel& m, int k)
{
    auto& cache = m.cache();
    auto ptr = cache.get(cache.bases, k, [&] {
        return std::make_shared<const DegreeBasis>(m.generators(), m.generators().size(), k);
    });
    return *ptr;
}

SparseVector to_sparse(const SullivanModel& m, const Polynomial& p, int k)
{
    const DegreeBasis& basis = full_basis(m, k);
    SparseVector v;
    v.reserve(p.size());
    for (const auto& [mono, c] : p.terms()) {
        if (mono.degree() != k)
            throw Error("polynomial is not homogeneous of degree " + std::to_string(k));
        auto i = basis.index_of(mono);
        if (!i)
            throw Error("monomial " + mono.to_string(m.generators()) + " is not in the basis");
        v.push_back(SparseEntry{static_cast<std::uint32_t>(*i), c});
    }
    std::sort(v.begin(), v.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    return v;
}

Polynomial to_polynomial(const SullivanModel& m, const SparseVector& v, int k)
{
    const DegreeBasis& basis = full_basis(m, k);
    Polynomial p;
    for (const auto& e : v)
        p.add_term(basis[e.index], e.value);
    return p;
}

SparseVector differential_column(const SullivanModel& m, const Monomial& mono)
{
    return to_sparse(m, apply_differential(m, mono), mono.degree() + 1);
}

namespace {

// Passes are shared between cutoffs k-2, k-1 and "full": those complexes have
// the same degree-k cochains except for the linear generators of degree k,
// which come last in basis order.
int pass_key(int k, int cutoff)
{
    const int ec = effective_cutoff(k, cutoff);
    return ec >= k - 2 ? k : ec;
}

std::shared_ptr<const PassData> pass_data(const SullivanModel& m, int k, int key)
{
    auto& cache = m.cache();
    return cache.get(cache.passes, std::make_pair(key, k), [&] {
        auto data = std::make_shared<PassData>();
        const DegreeBasis& basis = full_basis(m, k);
        const GeneratorSet& gens = m.generators();
        std::vector<SparseVector> columns;
        std::size_t linear = 0;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const Monomial& mono = basis[i];
            if (mono.top_generator() >= 0 && gens[static_cast<std::size_t>(mono.top_generator())].degree > key)
                continue;
            if (mono.is_linear() && mono.degree() == k)
                ++linear;
            data->columns.push_back(static_cast<std::uint32_t>(i));
            columns.push_back(differential_column(m, mono));
        }
        data->prefix = key == k ? columns.size() - linear : columns.size();
        data->reduction = reduce_columns(columns, data->prefix);
        return std::shared_ptr<const PassData>(std::move(data));
    });
}

}  // namespace

PassView pass(const SullivanModel& m, int k, int cutoff)
{
    const int key = pass_key(k, cutoff);
    auto data = pass_data(m, k, key);
    PassView v;
    v.reduction = &data->reduction;
    v.columns = &data->columns;
    v.degree = k;
    if (key == k && effective_cutoff(k, cutoff) < k) {
        v.row_limit = data->reduction.image_prefix_rank;
        v.kernel_limit = data->reduction.kernel_prefix_size;
    }
    else {
        v.row_limit = data->reduction.image.size();
        v.kernel_limit = data->reduction.kernel.size();
    }
    v.keep_alive = data;
    return v;
}

SparseVector kernel_vector(const PassView& p, std::size_t i)
{
    const SparseVector& raw = p.reduction->kernel.at(i);
    SparseVector v;
    v.reserve(raw.size());
    for (const auto& e : raw)
        v.push_back(SparseEntry{(*p.columns)[e.index], e.value});
    // Column positions and basis indices are both increasing.
    return v;
}

SparseVector CohomologyData::coordinates(const SparseVector& cocycle) const
{
    std::vector<std::pair<std::size_t, Rational>> used;
    if (!echelon.reduce(cocycle, Echelon::all, &used).empty())
        throw NotACocycle("vector is not a cocycle of the complex");
    std::map<std::uint32_t, Rational> acc;
    for (const auto& [r, c] : used)
        if (r >= boundary_rows) {
            auto& x = acc[static_cast<std::uint32_t>(r - boundary_rows)];
            x += c;
        }
    SparseVector out;
    for (const auto& [i, x] : acc)
        if (x != 0)
            out.push_back(SparseEntry{i, x});
    return out;
}

std::shared_ptr<const CohomologyData> cohomology_data(const SullivanModel& m, int k, int cutoff)
{
    int ec = effective_cutoff(k, cutoff);
    // Degrees k-1 and k only see generators up to degree k.
    if (ec < k && m.generators().prefix(ec) == m.generators().prefix(k))
        ec = k;
    auto& cache = m.cache();
    return cache.get(cache.cohomology, std::make_pair(ec, k), [&] {
        auto data = std::make_shared<CohomologyData>();
        data->degree = k;
        data->cutoff = ec >= k ? kNoCutoff : ec;
        if (k >= 1) {
            const PassView below = pass(m, k - 1, ec);
            for (std::size_t r = 0; r < below.row_limit; ++r)
                data->echelon.push_row(below.reduction->image.row(r));
        }
        data->boundary_rows = data->echelon.size();
        if (k >= 0) {
            const PassView here = pass(m, k, ec);
            data->cocycles = here.kernel_limit;
            for (std::size_t i = 0; i < here.kernel_limit; ++i) {
                SparseVector residual = data->echelon.reduce(kernel_vector(here, i));
                if (!residual.empty())
                    data->echelon.push_row(std::move(residual));
            }
        }
        return std::shared_ptr<const CohomologyData>(std::move(data));
    });
}

std::optional<Polynomial> solve_coboundary(const SullivanModel& m, int k, int cutoff, const Polynomial& target)
{
    const PassView p = pass(m, k, cutoff);
    auto x = p.reduction->preimage(to_sparse(m, target, k + 1), p.row_limit);
    if (!x)
        return std::nullopt;
    const DegreeBasis& basis = full_basis(m, k);
    Polynomial u;
    for (const auto& e : *x)
        u.add_term(basis[(*p.columns)[e.index]], e.value);
    return u;
}

}  // namespace detail

namespace {

void require_in_truncation(const SullivanModel& m, const Polynomial& p, int cutoff)
{
    const GeneratorSet& gens = m.generators();
    for (const auto& [mono, c] : p.terms())
        if (mono.top_generator() >= 0 && gens[static_cast<std::size_t>(mono.top_generator())].degree > cutoff)
            throw Error("polynomial does not lie in the truncation at degree " + std::to_string(cutoff));
}

}  // namespace

void release_cache(const SullivanModel& m) { m.cache().release_eliminations(); }

RationalMatrix coboundary_matrix(const SullivanModel& m, int k, int cutoff)
{
    const GeneratorSet& gens = m.generators();
    const std::size_t prefix = cutoff == kNoCutoff ? gens.size() : gens.prefix(cutoff);
    const DegreeBasis source(gens, prefix, k);
    const DegreeBasis target(gens, prefix, k + 1);
    RationalMatrix d(target.size(), source.size());
    for (std::size_t j = 0; j < source.size(); ++j)
        d.set_column(j, coordinates(apply_differential(m, source[j]), target));
    return d;
}

CohomologyBasis cohomology(const SullivanModel& m, int k, int cutoff)
{
    auto data = detail::cohomology_data(m, k, cutoff);
    CohomologyBasis b;
    b.degree = k;
    b.cutoff = cutoff >= k ? kNoCutoff : cutoff;
    b.cocycles = data->cocycles;
    b.coboundaries = data->boundary_rows;
    for (std::size_t i = 0; i < data->dimension(); ++i)
        b.representatives.push_back(detail::to_polynomial(m, data->representative(i), k));
    return b;
}

CohomologyClass class_of(const SullivanModel& m, int k, const Polynomial& p, int cutoff)
{
    auto deg = p.homogeneous_degree();
    if (!deg || (!p.is_zero() && *deg != k))
        throw Error("class_of: polynomial is not homogeneous of degree " + std::to_string(k));
    require_in_truncation(m, p, cutoff);
    if (!apply_differential(m, p).is_zero())
        throw NotACocycle("class_of: " + p.to_string(m.generators()) + " is not a cocycle");
    auto data = detail::cohomology_data(m, k, cutoff);
    CohomologyClass c;
    c.coordinates = make_dense(data->coordinates(detail::to_sparse(m, p, k)), data->dimension());
    return c;
}

RationalMatrix induced_map(const CochainMorphism& f, int k, int cutoff)
{
    const SullivanModel& src = *f.source();
    const SullivanModel& dst = *f.target();
    auto from = detail::cohomology_data(src, k, cutoff);
    auto to = detail::cohomology_data(dst, k, cutoff);
    RationalMatrix h(to->dimension(), from->dimension());
    for (std::size_t j = 0; j < from->dimension(); ++j) {
        const Polynomial image = f.apply(detail::to_polynomial(src, from->representative(j), k));
        h.set_column(j, make_dense(to->coordinates(detail::to_sparse(dst, image, k)), to->dimension()));
    }
    return h;
}

std::size_t pair_cohomology_dimension(const SullivanModel& m, int n, int k)
{
    const GeneratorSet& gens = m.generators();
    const std::size_t hi = gens.prefix(n + 1);
    const std::size_t lo = gens.prefix(n - 1);
    auto quotient_basis = [&](int d) {
        std::vector<Monomial> out;
        for (auto& mono : basis(gens, hi, d))
            if (mono.top_generator() >= static_cast<int>(lo))
                out.push_back(std::move(mono));
        return out;
    };
    auto rank_of = [&](int d) {
        const auto src = quotient_basis(d);
        const auto dst = quotient_basis(d + 1);
        std::map<Monomial, std::uint32_t> index;
        for (std::size_t i = 0; i < dst.size(); ++i)
            index.emplace(dst[i], static_cast<std::uint32_t>(i));
        Echelon e;
        for (const auto& mono : src) {
            SparseVector col;
            for (const auto& [t, c] : apply_differential(m, mono).terms()) {
                auto it = index.find(t);
                if (it != index.end())
                    col.push_back(SparseEntry{it->second, c});
            }
            std::sort(col.begin(), col.end(),
                      [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
            e.insert(col);
        }
        return std::make_pair(src.size(), e.size());
    };
    const auto [dim_k, rank_k] = rank_of(k);
    const auto rank_before = k > 0 ? rank_of(k - 1).second : 0;
    return dim_k - rank_k - rank_before;
}

}  // namespace mcca
