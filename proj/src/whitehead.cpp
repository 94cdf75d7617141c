#include "mcca/whitehead.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mcca {

namespace {

using detail::CohomologyData;

std::vector<std::size_t> generators_of_degree(const GeneratorSet& gens, int n)
{
    std::vector<std::size_t> out;
    for (std::size_t g = n > 0 ? gens.prefix(n - 1) : 0; g < gens.prefix(n); ++g)
        out.push_back(g);
    return out;
}

// Coefficients of the linear monomials of the given generators in a degree-n vector.
SparseVector linear_part(const SullivanModel& m, const SparseVector& v, int n, const std::vector<std::size_t>& gens)
{
    const DegreeBasis& basis = detail::full_basis(m, n);
    SparseVector out;
    for (std::size_t r = 0; r < gens.size(); ++r) {
        auto idx = basis.index_of(Monomial::generator(gens[r], m.generators()));
        if (!idx)
            continue;
        auto it = std::lower_bound(v.begin(), v.end(), static_cast<std::uint32_t>(*idx),
                                   [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
        if (it != v.end() && it->index == *idx)
            out.push_back(SparseEntry{static_cast<std::uint32_t>(r), it->value});
    }
    return out;
}

SparseMatrix identity_matrix(std::size_t n)
{
    SparseMatrix id;
    id.rows = n;
    id.columns.reserve(n);
    for (std::size_t c = 0; c < n; ++c)
        id.columns.push_back(unit_vector(static_cast<std::uint32_t>(c)));
    return id;
}

bool is_zero(const SparseMatrix& m)
{
    return std::all_of(m.columns.begin(), m.columns.end(), [](const SparseVector& c) { return c.empty(); });
}

ExactnessNode node(std::string name, int degree, std::size_t dim, const SparseMatrix& in, const SparseMatrix& out)
{
    ExactnessNode e;
    e.name = std::move(name);
    e.degree = degree;
    e.dimension = dim;
    e.rank_in = rank(in);
    e.rank_out = rank(out);
    e.composite_zero = in.rows == dim && out.cols() == dim && is_zero(multiply(out, in));
    e.exact = e.composite_zero && e.rank_in + e.rank_out == dim;
    return e;
}

std::string show(const SparseVector& v)
{
    std::ostringstream s;
    s << "(";
    for (std::size_t k = 0; k < v.size(); ++k)
        s << (k ? ", " : "") << v[k].index << ":" << v[k].value.get_str();
    s << ")";
    return s.str();
}

}  // namespace

SparseMatrix j_map(const SullivanModel& m, int n)
{
    auto data = detail::cohomology_data(m, n, kNoCutoff);
    const auto gens = generators_of_degree(m.generators(), n);
    SparseMatrix j;
    j.rows = gens.size();
    for (std::size_t c = 0; c < data->dimension(); ++c)
        j.columns.push_back(gens.empty() ? SparseVector{} : linear_part(m, data->representative(c), n, gens));
    return j;
}

WhiteheadSequence build_wes(ModelPtr m, int last)
{
    const GeneratorSet& gens = m->generators();
    WhiteheadSequence w;
    w.model = m;
    w.first = 3;
    w.last = last >= 3 ? last : std::max(3, gens.max_degree() + 1);
    for (int n = w.first; n <= w.last; ++n) {
        WesDegree d;
        d.n = n;
        d.generators = generators_of_degree(gens, n);
        auto gamma = detail::cohomology_data(*m, n + 1, n - 1);
        auto full = detail::cohomology_data(*m, n + 1, kNoCutoff);
        d.gamma_dim = gamma->dimension();
        d.h_dim = full->dimension();
        d.j_in = j_map(*m, n);
        d.h_in_dim = d.j_in.cols();

        d.b.rows = d.gamma_dim;
        for (std::size_t g : d.generators) {
            const Polynomial& dv = m->differential(g);
            d.b.columns.push_back(dv.is_zero() ? SparseVector{}
                                                : gamma->coordinates(detail::to_sparse(*m, dv, n + 1)));
        }

        d.i_is_identity = gamma == full;
        if (d.i_is_identity) {
            d.i = identity_matrix(d.gamma_dim);
        }
        else {
            d.i.rows = d.h_dim;
            for (std::size_t c = 0; c < d.gamma_dim; ++c)
                d.i.columns.push_back(full->coordinates(gamma->representative(c)));
        }
        w.degrees.push_back(std::move(d));
    }
    w.j_out = j_map(*m, w.last + 1);
    return w;
}

bool ExactnessReport::exact() const { return first_failure() == nullptr; }

const ExactnessNode* ExactnessReport::first_failure() const
{
    for (const auto& n : nodes)
        if (!n.exact)
            return &n;
    return nullptr;
}

ExactnessReport check_exactness(const WhiteheadSequence& w)
{
    ExactnessReport r;
    for (std::size_t k = 0; k < w.degrees.size(); ++k) {
        const WesDegree& d = w.degrees[k];
        const SparseMatrix& j_next = k + 1 < w.degrees.size() ? w.degrees[k + 1].j_in : w.j_out;
        const std::string up = std::to_string(d.n + 1);
        r.nodes.push_back(node("V^" + std::to_string(d.n), d.n, d.generators.size(), d.j_in, d.b));
        r.nodes.push_back(node("Γ^" + up, d.n + 1, d.gamma_dim, d.b, d.i));
        r.nodes.push_back(node("H^" + up, d.n + 1, d.h_dim, d.i, j_next));
    }
    return r;
}

bool NaturalityReport::commutes() const
{
    return std::all_of(squares.begin(), squares.end(), [](const NaturalitySquare& s) { return s.commutes; });
}

NaturalityReport naturality_check(const CochainMorphism& f, int n)
{
    const SullivanModel& a = *f.source();
    const SullivanModel& b = *f.target();
    const auto va = generators_of_degree(a.generators(), n);
    const auto vb = generators_of_degree(b.generators(), n);

    // ξ^n: V_A^n -> V_B^n, the linear part of f on generators.
    std::vector<SparseVector> xi;
    for (std::size_t g : va)
        xi.push_back(linear_part(b, detail::to_sparse(b, f.image(g), n), n, vb));
    auto xi_apply = [&](const SparseVector& x) {
        std::map<std::uint32_t, Rational> acc;
        for (const auto& e : x)
            for (const auto& t : xi[e.index])
                acc[t.index] += e.value * t.value;
        SparseVector out;
        for (const auto& [i, q] : acc)
            if (q != 0)
                out.push_back(SparseEntry{i, q});
        return out;
    };

    NaturalityReport rep;
    rep.degree = n;

    auto gamma_a = detail::cohomology_data(a, n + 1, n - 1);
    auto gamma_b = detail::cohomology_data(b, n + 1, n - 1);
    auto full_a = detail::cohomology_data(a, n + 1, kNoCutoff);
    auto full_b = detail::cohomology_data(b, n + 1, kNoCutoff);
    auto class_in = [&](const CohomologyData& data, const SullivanModel& m, const Polynomial& p, int k) {
        return p.is_zero() ? SparseVector{} : data.coordinates(detail::to_sparse(m, p, k));
    };

    auto mismatch = [](NaturalitySquare& sq, const std::string& where, const SparseVector& l, const SparseVector& r) {
        if (l == r)
            return;
        sq.commutes = false;
        if (sq.detail.empty())
            sq.detail = where + ": " + show(l) + " vs " + show(r);
    };
    auto image_of = [&](const SparseVector& rep, int k) {
        return detail::to_sparse(b, f.apply(detail::to_polynomial(a, rep, k)), k);
    };

    NaturalitySquare sb{"b' ξ = H(f) b", true, ""};
    for (std::size_t k = 0; k < va.size(); ++k) {
        Polynomial d_xi;
        for (const auto& e : xi[k]) {
            Polynomial t = b.differential(vb[e.index]);
            t *= e.value;
            d_xi += t;
        }
        mismatch(sb, a.generators()[va[k]].name, class_in(*gamma_b, b, d_xi, n + 1),
                 class_in(*gamma_b, b, f.apply(a.differential(va[k])), n + 1));
    }
    rep.squares.push_back(sb);

    NaturalitySquare si{"i' H(f) = H(f) i", true, ""};
    {
        std::vector<SparseVector> f_on_full(full_a->dimension());
        std::vector<bool> done(full_a->dimension(), false);
        for (std::size_t c = 0; c < gamma_a->dimension(); ++c) {
            const SparseVector via_b = gamma_b->coordinates(image_of(gamma_a->representative(c), n + 1));
            SparseVector lhs;
            for (const auto& e : via_b)
                lhs = axpy(lhs, e.value, full_b->coordinates(gamma_b->representative(e.index)));
            SparseVector rhs;
            for (const auto& e : full_a->coordinates(gamma_a->representative(c))) {
                if (!done[e.index]) {
                    f_on_full[e.index] = full_b->coordinates(image_of(full_a->representative(e.index), n + 1));
                    done[e.index] = true;
                }
                rhs = axpy(rhs, e.value, f_on_full[e.index]);
            }
            mismatch(si, "class " + std::to_string(c), lhs, rhs);
        }
    }
    rep.squares.push_back(si);

    NaturalitySquare sj{"j' H(f) = ξ j", true, ""};
    if (!va.empty() || !vb.empty()) {
        auto h_a = detail::cohomology_data(a, n, kNoCutoff);
        for (std::size_t c = 0; c < h_a->dimension(); ++c) {
            const SparseVector lhs = linear_part(b, image_of(h_a->representative(c), n), n, vb);
            const SparseVector rhs = xi_apply(linear_part(a, h_a->representative(c), n, va));
            mismatch(sj, "class " + std::to_string(c), lhs, rhs);
        }
    }
    rep.squares.push_back(sj);
    return rep;
}

}  // namespace mcca
