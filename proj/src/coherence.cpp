#include "mcca/coherence.hpp"

#include <algorithm>
#include <set>

namespace mcca {

namespace {

std::set<int> generator_degrees(const GeneratorSet& gens)
{
    std::set<int> out;
    for (const auto& g : gens)
        out.insert(g.degree);
    return out;
}

void require_diagonal(const SullivanModel& m)
{
    for (int d : generator_degrees(m.generators()))
        if (m.generators().of_degree(d).size() > 1)
            throw Error("model '" + m.label() + "' has more than one generator in degree " + std::to_string(d));
}

}  // namespace

GradedLinearMap::GradedLinearMap(ModelPtr source, ModelPtr target)
    : source_(std::move(source)), target_(std::move(target))
{
    if (!source_ || !target_)
        throw Error("graded linear map needs a source and a target");
}

GradedLinearMap GradedLinearMap::identity(ModelPtr m)
{
    GradedLinearMap id(m, m);
    for (int d : generator_degrees(m->generators()))
        id.set_block(d, RationalMatrix::identity(m->generators().of_degree(d).size()));
    return id;
}

GradedLinearMap GradedLinearMap::diagonal(ModelPtr source, ModelPtr target, const std::map<int, Rational>& p)
{
    require_diagonal(*source);
    require_diagonal(*target);
    GradedLinearMap f(source, target);
    for (const auto& [d, value] : p) {
        const auto src = source->generators().of_degree(d);
        const auto dst = target->generators().of_degree(d);
        if (src.empty() || dst.empty())
            throw Error("diagonal map: no generator of degree " + std::to_string(d) + " on both sides");
        RationalMatrix b(1, 1);
        b(0, 0) = value;
        f.set_block(d, std::move(b));
    }
    return f;
}

void GradedLinearMap::set_block(int d, RationalMatrix block)
{
    const std::size_t rows = target_->generators().of_degree(d).size();
    const std::size_t cols = source_->generators().of_degree(d).size();
    if (block.rows() != rows || block.cols() != cols)
        throw Error("graded linear map: block in degree " + std::to_string(d) + " must be " + std::to_string(rows) +
                    "x" + std::to_string(cols));
    if (rows == 0 || cols == 0)
        return;
    blocks_[d] = std::move(block);
}

RationalMatrix GradedLinearMap::block(int d) const
{
    auto it = blocks_.find(d);
    if (it != blocks_.end())
        return it->second;
    return RationalMatrix(target_->generators().of_degree(d).size(), source_->generators().of_degree(d).size());
}

Polynomial GradedLinearMap::image(std::size_t source_generator) const
{
    const GeneratorSet& sg = source_->generators();
    const GeneratorSet& tg = target_->generators();
    const int d = sg[source_generator].degree;
    auto it = blocks_.find(d);
    Polynomial p;
    if (it == blocks_.end())
        return p;
    const auto src = sg.of_degree(d);
    const auto dst = tg.of_degree(d);
    const std::size_t col = static_cast<std::size_t>(std::find(src.begin(), src.end(), source_generator) - src.begin());
    for (std::size_t r = 0; r < dst.size(); ++r)
        if (it->second(r, col) != 0)
            p.add_term(Monomial::generator(dst[r], tg), it->second(r, col));
    return p;
}

std::map<int, Rational> GradedLinearMap::diagonal_entries() const
{
    std::map<int, Rational> out;
    for (int d : generator_degrees(source_->generators())) {
        const RationalMatrix b = block(d);
        if (b.rows() != 1 || b.cols() != 1)
            throw Error("graded linear map is not diagonal in degree " + std::to_string(d));
        out[d] = b(0, 0);
    }
    return out;
}

bool GradedLinearMap::operator==(const GradedLinearMap& o) const
{
    if (!source_->same_algebra(*o.source_) || !target_->same_algebra(*o.target_))
        return false;
    for (int d : generator_degrees(source_->generators()))
        if (!(block(d) == o.block(d)))
            return false;
    return true;
}

GradedLinearMap compose(const GradedLinearMap& g, const GradedLinearMap& f)
{
    if (f.target() != g.source() && !f.target()->same_algebra(*g.source()))
        throw Error("compose: target of the inner map is not the source of the outer one");
    GradedLinearMap h(f.source(), g.target());
    for (int d : generator_degrees(f.source()->generators()))
        h.set_block(d, g.block(d) * f.block(d));
    return h;
}

GradedLinearMap inverse(const GradedLinearMap& f)
{
    GradedLinearMap inv(f.target(), f.source());
    std::set<int> degrees = generator_degrees(f.source()->generators());
    degrees.merge(generator_degrees(f.target()->generators()));
    for (int d : degrees) {
        auto b = mcca::inverse(f.block(d));
        if (!b)
            throw Error("graded linear map is not invertible in degree " + std::to_string(d));
        inv.set_block(d, std::move(*b));
    }
    return inv;
}

LiftResult try_lift(const GradedLinearMap& xi)
{
    const SullivanModel& a = *xi.source();
    const SullivanModel& b = *xi.target();
    const GeneratorSet& sg = a.generators();
    std::vector<Polynomial> theta(sg.size());
    LiftResult result;
    for (std::size_t v = 0; v < sg.size(); ++v) {
        const int d = sg[v].degree;
        const Polynomial lin = xi.image(v);
        // Generators before v (all of lower or equal degree) already carry θ;
        // dv only involves generators of degree < d.
        Polynomial diff;
        for (const auto& [mono, c] : a.differential(v).terms()) {
            Polynomial t = apply_images(theta, mono, b.generators());
            t *= c;
            diff += t;
        }
        diff -= apply_differential(b, lin);
        if (diff.is_zero()) {
            theta[v] = lin;
            continue;
        }
        auto u = detail::solve_coboundary(b, d, d - 1, diff);
        if (!u) {
            Obstruction o;
            o.degree = d;
            o.generator = v;
            o.generator_name = sg[v].name;
            o.class_coordinates = class_of(b, d + 1, diff, d - 1).coordinates;
            o.difference = std::move(diff);
            result.obstruction = std::move(o);
            return result;
        }
        theta[v] = lin + *u;
    }
    result.morphism.emplace(xi.source(), xi.target(), std::move(theta));
    return result;
}

CoherenceVerdict is_coherent(const GradedLinearMap& xi)
{
    CoherenceVerdict v;
    v.lift = try_lift(xi);
    v.coherent = v.lift.ok();
    v.label = v.coherent ? "coherent (witness found)" : "obstructed along canonical branch";
    return v;
}

GradedLinearMap induced_on_indecomposables(const CochainMorphism& f)
{
    const GeneratorSet& sg = f.source()->generators();
    const GeneratorSet& tg = f.target()->generators();
    GradedLinearMap xi(f.source(), f.target());
    for (int d : generator_degrees(sg)) {
        const auto src = sg.of_degree(d);
        const auto dst = tg.of_degree(d);
        RationalMatrix block(dst.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c)
            for (std::size_t r = 0; r < dst.size(); ++r)
                block(r, c) = f.image(src[c]).coefficient(Monomial::generator(dst[r], tg));
        xi.set_block(d, std::move(block));
    }
    return xi;
}

InverseLift invert_coherent(const GradedLinearMap& xi, const CochainMorphism& theta)
{
    if (!(induced_on_indecomposables(theta) == xi))
        throw Error("invert_coherent: θ does not induce ξ");
    const GradedLinearMap xi_inv = inverse(xi);
    const SullivanModel& a = *theta.source();
    const SullivanModel& b = *theta.target();
    const GeneratorSet& sg = a.generators();
    const GeneratorSet& tg = b.generators();

    // ψ(w) = Σ_v (ξ^{-1})_{vw} (v - ψ(u_v)) with θ(v) = ξ(v) + u_v, by degree.
    std::vector<Polynomial> psi(tg.size());
    for (int d : generator_degrees(tg)) {
        const auto src = sg.of_degree(d);
        const auto dst = tg.of_degree(d);
        const RationalMatrix inv = xi_inv.block(d);
        std::vector<Polynomial> rest;
        for (std::size_t v : src) {
            Polynomial u = theta.image(v) - xi.image(v);
            Polynomial r(Monomial::generator(v, sg));
            for (const auto& [mono, c] : u.terms()) {
                Polynomial t = apply_images(psi, mono, sg);
                t *= c;
                r -= t;
            }
            rest.push_back(std::move(r));
        }
        for (std::size_t w = 0; w < dst.size(); ++w) {
            Polynomial p;
            for (std::size_t v = 0; v < src.size(); ++v) {
                if (inv(v, w) == 0)
                    continue;
                Polynomial t = rest[v];
                t *= inv(v, w);
                p += t;
            }
            psi[dst[w]] = std::move(p);
        }
    }
    CochainMorphism back(theta.target(), theta.source(), std::move(psi));
    if (!(compose(back, theta) == CochainMorphism::identity(theta.source())) ||
        !(compose(theta, back) == CochainMorphism::identity(theta.target())))
        throw Error("invert_coherent: back-substitution did not produce a two-sided inverse");
    return InverseLift{induced_on_indecomposables(back), std::move(back)};
}

bool GapReport::unique_lifts() const
{
    return std::all_of(rows.begin(), rows.end(), [](const GapRow& r) { return r.dimension == 0; });
}

GapReport gap_report(const SullivanModel& m)
{
    const GeneratorSet& gens = m.generators();
    GapReport r;
    for (int d : generator_degrees(gens))
        r.rows.push_back(GapRow{d, basis(gens, gens.prefix(d - 1), d).size()});
    return r;
}

}  // namespace mcca
