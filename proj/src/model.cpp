#include "mcca/model.hpp"

#include "complex_cache.hpp"

#include <algorithm>

namespace mcca {

SullivanModel::SullivanModel(std::string label, GeneratorSet gens, std::vector<Polynomial> differential,
                             std::vector<VanishedTerm> vanished_terms)
    : label_(std::move(label)), gens_(std::move(gens)), differential_(std::move(differential)),
      vanished_(std::move(vanished_terms)), cache_(std::make_unique<ComplexCache>())
{
    if (differential_.size() != gens_.size())
        throw Error("model '" + label_ + "': differential must be given for every generator");
    for (const auto& p : differential_)
        for (const auto& [mono, c] : p.terms())
            if (mono.top_generator() >= static_cast<int>(gens_.size()))
                throw Error("model '" + label_ + "': differential refers to an unknown generator");
}

SullivanModel::SullivanModel(const SullivanModel& o)
    : label_(o.label_), gens_(o.gens_), differential_(o.differential_), vanished_(o.vanished_),
      cache_(std::make_unique<ComplexCache>())
{
}

SullivanModel::SullivanModel(SullivanModel&& o) noexcept = default;

SullivanModel::~SullivanModel() = default;

bool SullivanModel::same_algebra(const SullivanModel& o) const
{
    return gens_ == o.gens_ && differential_ == o.differential_;
}

bool ValidationReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

Polynomial apply_differential(const SullivanModel& m, const Monomial& mono)
{
    const GeneratorSet& gens = m.generators();
    const auto& fs = mono.factors();
    Polynomial out;
    int before_degree = 0;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const Factor f = fs[k];
        const Polynomial& dg = m.differential(f.gen);
        const int g_degree = gens[f.gen].degree;
        if (!dg.is_zero()) {
            std::vector<Factor> left(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(k));
            if (f.exp > 1)
                left.push_back(Factor{f.gen, static_cast<std::uint16_t>(f.exp - 1)});
            const Monomial before = Monomial::unchecked(std::move(left), before_degree + g_degree * (f.exp - 1));
            std::vector<Factor> right(fs.begin() + static_cast<std::ptrdiff_t>(k) + 1, fs.end());
            const Monomial after =
                Monomial::unchecked(std::move(right), mono.degree() - before_degree - g_degree * f.exp);
            Rational scale = f.exp;
            if (before_degree % 2 != 0)
                scale = -scale;
            for (const auto& [term, c] : dg.terms()) {
                auto left_prod = multiply(before, term, gens);
                if (!left_prod)
                    continue;
                auto full = multiply(left_prod->monomial, after, gens);
                if (!full)
                    continue;
                Rational coef = c * scale;
                if (left_prod->sign * full->sign < 0)
                    coef = -coef;
                out.add_term(full->monomial, coef);
            }
        }
        before_degree += g_degree * f.exp;
    }
    return out;
}

Polynomial apply_differential(const SullivanModel& m, const Polynomial& p)
{
    if (!p.homogeneous_degree())
        throw Error("apply_differential: polynomial is not homogeneous");
    Polynomial out;
    for (const auto& [mono, c] : p.terms()) {
        Polynomial d = apply_differential(m, mono);
        d *= c;
        out += d;
    }
    return out;
}

ValidationReport validate(const SullivanModel& m)
{
    const GeneratorSet& gens = m.generators();
    ValidationReport r;
    ValidationCheck degree{"degree", true, ""}, minimal{"minimality", true, ""}, connected{"1-connected", true, ""},
        square{"d^2 = 0", true, ""};
    auto fail = [](ValidationCheck& c, const std::string& msg) {
        c.passed = false;
        if (!c.detail.empty())
            c.detail += "; ";
        c.detail += msg;
    };
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Generator& g = gens[i];
        const Polynomial& d = m.differential(i);
        if (g.degree < 2)
            fail(connected, g.name + " has degree " + std::to_string(g.degree));
        for (const auto& [mono, c] : d.terms()) {
            if (mono.degree() != g.degree + 1)
                fail(degree, "d(" + g.name + ") term " + mono.to_string(gens) + " has degree " +
                                 std::to_string(mono.degree()) + " != " + std::to_string(g.degree + 1));
            if (mono.length() < 2)
                fail(minimal, "d(" + g.name + ") term " + mono.to_string(gens) + " is not decomposable");
        }
    }
    // d∘d is only meaningful on homogeneous differentials.
    if (degree.passed) {
        for (std::size_t i = 0; i < gens.size(); ++i) {
            Polynomial dd = apply_differential(m, m.differential(i));
            if (!dd.is_zero())
                fail(square, "d(d(" + gens[i].name + ")) = " + dd.to_string(gens));
        }
    }
    else {
        fail(square, "skipped: differential not homogeneous of degree +1");
    }
    r.checks = {degree, minimal, connected, square};
    for (const auto& v : m.vanished_terms())
        r.warnings.push_back(v.message());
    return r;
}

SullivanModel truncate(const SullivanModel& m, int n)
{
    if (n < 0)
        throw Error("truncate: negative cutoff");
    const GeneratorSet& gens = m.generators();
    const std::size_t keep = gens.prefix(n);
    std::vector<Generator> kept(gens.begin(), gens.begin() + static_cast<std::ptrdiff_t>(keep));
    std::vector<Polynomial> diff;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < keep; ++i) {
        const Polynomial& d = m.differential(i);
        for (const auto& [mono, c] : d.terms())
            if (mono.top_generator() >= static_cast<int>(keep))
                throw Error("truncate: d(" + gens[i].name + ") leaves the truncation; the model is not minimal");
        diff.push_back(d);
        names.push_back(gens[i].name);
    }
    std::vector<VanishedTerm> notes;
    for (const auto& v : m.vanished_terms())
        if (std::find(names.begin(), names.end(), v.generator) != names.end())
            notes.push_back(v);
    return SullivanModel(m.label() + "<=" + std::to_string(n), GeneratorSet(std::move(kept)), std::move(diff),
                         std::move(notes));
}

SullivanModel extend_tower(const SullivanModel& m, const std::string& closing_generator, const TowerStep& step,
                           std::string label)
{
    const GeneratorSet& gens = m.generators();
    const std::size_t z = gens.index(closing_generator);
    if (step.degree < 2)
        throw Error("extend_tower: new generator degree must be >= 2");
    if (step.exponent < 1 || step.degree * step.exponent != gens[z].degree + 1)
        throw Error("extend_tower: degree * exponent = " + std::to_string(step.degree * step.exponent) +
                    " but |" + closing_generator + "| + 1 = " + std::to_string(gens[z].degree + 1));
    std::string name = step.name.empty() ? "x" + std::to_string(step.degree) : step.name;
    if (gens.find(name)) {
        if (!step.name.empty())
            throw Error("extend_tower: generator '" + name + "' already exists");
        const std::string base = name;
        for (int i = 1; gens.find(name); ++i)
            name = base + "_" + std::to_string(i);
    }
    std::vector<Generator> all = gens.all();
    all.push_back(Generator{name, step.degree});
    GeneratorSet next(all);

    std::vector<std::uint16_t> remap(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
        remap[i] = static_cast<std::uint16_t>(next.index(gens[i].name));
    auto translate = [&](const Polynomial& p) {
        Polynomial q;
        for (const auto& [mono, c] : p.terms()) {
            std::vector<Factor> fs;
            for (const Factor& f : mono.factors())
                fs.push_back(Factor{remap[f.gen], f.exp});
            q.add_term(Monomial(std::move(fs), next), c);
        }
        return q;
    };
    std::vector<Polynomial> diff(next.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
        diff[remap[i]] = translate(m.differential(i));

    std::vector<VanishedTerm> notes = m.vanished_terms();
    const std::size_t x = next.index(name);
    const std::string written = name + "^" + std::to_string(step.exponent);
    auto term = canonicalize({{x, step.exponent}}, next);
    if (term)
        diff[remap[z]].add_term(term->monomial, term->sign);
    else
        notes.push_back(VanishedTerm{closing_generator, written});

    if (label.empty())
        label = m.label() + "+" + written;
    return SullivanModel(std::move(label), std::move(next), std::move(diff), std::move(notes));
}

Polynomial apply_images(const std::vector<Polynomial>& images, const Monomial& m, const GeneratorSet& target)
{
    Polynomial result{Monomial{}};
    for (const Factor& f : m.factors()) {
        const Polynomial& img = images.at(f.gen);
        result = multiply(result, f.exp == 1 ? img : power(img, f.exp, target), target);
        if (result.is_zero())
            break;
    }
    return result;
}

CochainMorphism::CochainMorphism(ModelPtr source, ModelPtr target, std::vector<Polynomial> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images))
{
    if (!source_ || !target_)
        throw Error("cochain morphism needs a source and a target");
    const GeneratorSet& sg = source_->generators();
    const GeneratorSet& tg = target_->generators();
    if (images_.size() != sg.size())
        throw Error("cochain morphism: one image per source generator required");
    for (std::size_t i = 0; i < sg.size(); ++i) {
        for (const auto& [mono, c] : images_[i].terms()) {
            if (mono.top_generator() >= static_cast<int>(tg.size()))
                throw Error("cochain morphism: image refers to an unknown target generator");
            if (mono.degree() != sg[i].degree)
                throw Error("cochain morphism: image of " + sg[i].name + " has degree " +
                            std::to_string(mono.degree()) + ", expected " + std::to_string(sg[i].degree));
        }
    }
    for (std::size_t i = 0; i < sg.size(); ++i) {
        const Polynomial lhs = apply_differential(*target_, images_[i]);
        const Polynomial rhs = apply(source_->differential(i));
        if (!(lhs == rhs))
            throw Error("cochain morphism: does not commute with the differential on " + sg[i].name);
    }
}

CochainMorphism CochainMorphism::identity(ModelPtr m)
{
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < m->generators().size(); ++i)
        images.emplace_back(Monomial::generator(i, m->generators()));
    return CochainMorphism(m, m, std::move(images));
}

Polynomial CochainMorphism::apply(const Monomial& m) const
{
    return apply_images(images_, m, target_->generators());
}

Polynomial CochainMorphism::apply(const Polynomial& p) const
{
    Polynomial out;
    for (const auto& [mono, c] : p.terms()) {
        Polynomial img = apply(mono);
        img *= c;
        out += img;
    }
    return out;
}

bool CochainMorphism::operator==(const CochainMorphism& o) const
{
    return source_->same_algebra(*o.source_) && target_->same_algebra(*o.target_) && images_ == o.images_;
}

CochainMorphism compose(const CochainMorphism& f, const CochainMorphism& g)
{
    if (g.target() != f.source() && !g.target()->same_algebra(*f.source()))
        throw Error("compose: target of the inner morphism is not the source of the outer one");
    std::vector<Polynomial> images;
    for (const auto& img : g.images())
        images.push_back(f.apply(img));
    return CochainMorphism(g.source(), f.target(), std::move(images));
}

}  // namespace mcca
