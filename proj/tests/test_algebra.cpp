#include "mcca/dsl.hpp"
#include "mcca/model.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace mcca;
using mcca::testing::Gen;

namespace {

GeneratorSet mixed()
{
    return GeneratorSet({{"a", 2}, {"b", 3}, {"c", 4}, {"e", 5}, {"f", 7}});
}

Polynomial poly(const Monomial& m) { return Polynomial(m); }

}  // namespace

TEST(Generators, SortedByDegreeThenName)
{
    GeneratorSet g({{"z", 4}, {"y", 2}, {"x", 4}});
    EXPECT_EQ(g[0].name, "y");
    EXPECT_EQ(g[1].name, "x");
    EXPECT_EQ(g.prefix(3), 1u);
    EXPECT_EQ(g.prefix(4), 3u);
    EXPECT_THROW(GeneratorSet({{"x", 2}, {"x", 3}}), Error);
    EXPECT_THROW(GeneratorSet({{"x", 0}}), Error);
}

TEST(Monomials, OddSquareVanishes)
{
    const GeneratorSet g = mixed();
    const auto b = Monomial::generator(1, g);
    EXPECT_FALSE(multiply(b, b, g).has_value());
    const auto a = Monomial::generator(0, g);
    auto aa = multiply(a, a, g);
    ASSERT_TRUE(aa);
    EXPECT_EQ(aa->monomial.to_string(g), "a^2");
}

TEST(Monomials, KoszulSignOfSwap)
{
    const GeneratorSet g = mixed();
    auto fe = canonicalize({{4, 1}, {3, 1}}, g);
    ASSERT_TRUE(fe);
    EXPECT_EQ(fe->sign, -1);
    auto ce = canonicalize({{3, 1}, {2, 1}}, g);
    EXPECT_EQ(ce->sign, 1);
}

TEST(AlgebraProperties, GradedCommutativity)
{
    const GeneratorSet g = mixed();
    Gen gen(11);
    for (int trial = 0; trial < 300; ++trial) {
        const Monomial x = gen.monomial(g, 4), y = gen.monomial(g, 4);
        const Polynomial xy = multiply(poly(x), poly(y), g);
        const Polynomial yx = multiply(poly(y), poly(x), g);
        const int s = (x.degree() * y.degree()) % 2 ? -1 : 1;
        EXPECT_EQ(xy, yx * Rational(s));
    }
}

TEST(AlgebraProperties, Associativity)
{
    const GeneratorSet g = mixed();
    Gen gen(12);
    for (int trial = 0; trial < 200; ++trial) {
        const Polynomial x = gen.polynomial(g, 3, 3), y = gen.polynomial(g, 3, 3), z = gen.polynomial(g, 3, 3);
        EXPECT_EQ(multiply(multiply(x, y, g), z, g), multiply(x, multiply(y, z, g), g));
    }
}

TEST(AlgebraProperties, Distributivity)
{
    const GeneratorSet g = mixed();
    Gen gen(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Polynomial x = gen.polynomial(g, 3, 3), y = gen.polynomial(g, 3, 3), z = gen.polynomial(g, 3, 3);
        EXPECT_EQ(multiply(x, y + z, g), multiply(x, y, g) + multiply(x, z, g));
    }
}

TEST(AlgebraProperties, PowerMatchesRepeatedProduct)
{
    const GeneratorSet g = mixed();
    const Polynomial p = poly(Monomial::generator(0, g)) + poly(Monomial::generator(2, g));
    Polynomial q = p;
    for (int e = 2; e <= 5; ++e) {
        q = multiply(q, p, g);
        EXPECT_EQ(power(p, e, g), q);
    }
}

TEST(Basis, CountMatchesHilbertSeriesOnSmallSet)
{
    const GeneratorSet g = mixed();
    const auto series = mcca::testing::hilbert_series(g, 40);
    for (int k = 0; k <= 40; ++k)
        EXPECT_EQ(Integer(basis(g, k).size()), series[static_cast<std::size_t>(k)]) << "degree " << k;
}

TEST(Basis, PrefixRestrictsGenerators)
{
    const GeneratorSet g = mixed();
    for (const auto& m : basis(g, 2, 12))
        EXPECT_LT(m.top_generator(), 2);
}

TEST(DegreeBasis, CoordinatesRoundTrip)
{
    const GeneratorSet g = mixed();
    Gen gen(14);
    const DegreeBasis b(g, g.size(), 14);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> v(b.size());
        for (auto& x : v)
            if (gen.coin(0.3))
                x = gen.rational();
        EXPECT_EQ(coordinates(from_coordinates(v, b), b), v);
    }
}

class BuiltinModel : public ::testing::TestWithParam<std::string> {};

TEST_P(BuiltinModel, Validates)
{
    const ModelPtr m = load_builtin(GetParam());
    const ValidationReport r = validate(*m);
    EXPECT_TRUE(r.ok());
    const bool expect_warning = GetParam()[0] == 'U';
    EXPECT_EQ(!r.warnings.empty(), expect_warning);
}

TEST_P(BuiltinModel, DifferentialSquaresToZeroOnRandomMonomials)
{
    const ModelPtr m = load_builtin(GetParam());
    Gen gen(15);
    for (std::size_t v = 0; v < m->generators().size(); ++v)
        EXPECT_TRUE(apply_differential(*m, m->differential(v)).is_zero());
    for (int trial = 0; trial < 60; ++trial) {
        const Monomial x = gen.monomial(m->generators(), 3);
        EXPECT_TRUE(apply_differential(*m, apply_differential(*m, x)).is_zero());
    }
}

TEST_P(BuiltinModel, Leibniz)
{
    const ModelPtr m = load_builtin(GetParam());
    const GeneratorSet& g = m->generators();
    Gen gen(16);
    for (int trial = 0; trial < 60; ++trial) {
        const Monomial a = gen.monomial(g, 2), b = gen.monomial(g, 2);
        const Polynomial lhs = apply_differential(*m, multiply(poly(a), poly(b), g));
        const Polynomial rhs = multiply(apply_differential(*m, a), poly(b), g) +
                               multiply(poly(a), apply_differential(*m, b), g) * Rational(a.degree() % 2 ? -1 : 1);
        EXPECT_EQ(lhs, rhs);
    }
}

TEST_P(BuiltinModel, BasisDimensionsMatchGeneratingFunction)
{
    const ModelPtr m = load_builtin(GetParam());
    const auto series = mcca::testing::hilbert_series(m->generators(), 121);
    for (int k = 0; k <= 121; k += 7)
        EXPECT_EQ(Integer(basis(m->generators(), k).size()), series[static_cast<std::size_t>(k)]) << "degree " << k;
}

INSTANTIATE_TEST_SUITE_P(All, BuiltinModel, ::testing::ValuesIn(builtin_labels()),
                         [](const auto& info) {
                             std::string s = info.param;
                             for (char& c : s)
                                 if (c == '-')
                                     c = '_';
                             return s;
                         });

TEST(Model, RejectsNonMinimalDifferential)
{
    EXPECT_FALSE(validate(parse_model("model bad;\ngen x : 4;\ngen y : 3;\nd y = x;\n")).ok());
    const SullivanModel lin("lin", GeneratorSet({{"x", 4}, {"y", 3}}), {Polynomial{}, Polynomial{}});
    EXPECT_TRUE(validate(lin).ok());
}

TEST(Model, ExtendTowerAddsClosedGenerator)
{
    const ModelPtr v = load_builtin("V-ex31");
    const SullivanModel w = extend_tower(*v, "z", TowerStep{2, 60, "x0"}, "W");
    EXPECT_EQ(w.generators().size(), 7u);
    EXPECT_TRUE(w.same_algebra(*load_builtin("W-ex32")));
    EXPECT_THROW(extend_tower(*v, "z", TowerStep{5, 20, ""}), Error);
    const SullivanModel odd = extend_tower(*v, "z", TowerStep{3, 40, ""});
    EXPECT_EQ(odd.vanished_terms().size(), 1u);
}

TEST(Model, TruncateKeepsLowGenerators)
{
    const ModelPtr v = load_builtin("V-ex31");
    const SullivanModel t = truncate(*v, 44);
    EXPECT_EQ(t.generators().size(), 4u);
    EXPECT_TRUE(validate(t).ok());
}

TEST(CochainMorphism, RejectsMapsThatDoNotCommuteWithD)
{
    const ModelPtr v = load_builtin("V-ex31");
    const GeneratorSet& g = v->generators();
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < g.size(); ++i)
        images.emplace_back(Monomial::generator(i, g));
    images[g.index("y1")] *= Rational(2);
    EXPECT_THROW(CochainMorphism(v, v, images), Error);
}

TEST(CochainMorphism, IdentityComposes)
{
    const ModelPtr v = load_builtin("V-ex31");
    const auto id = CochainMorphism::identity(v);
    EXPECT_EQ(compose(id, id), id);
}
