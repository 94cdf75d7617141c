#include "mcca/coherence.hpp"
#include "mcca/diag_solver.hpp"
#include "mcca/dsl.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace mcca;
using mcca::testing::Gen;

namespace {

std::map<int, Rational> diag(const std::vector<int>& degrees, const std::vector<Rational>& p)
{
    std::map<int, Rational> out;
    for (std::size_t i = 0; i < degrees.size(); ++i)
        out[degrees[i]] = p[i];
    return out;
}

const std::vector<int> kV{10, 12, 41, 43, 45, 119};

std::vector<Rational> q(std::initializer_list<int> v)
{
    std::vector<Rational> out;
    for (int x : v)
        out.emplace_back(x);
    return out;
}

// Whether target lies in the image of d: (ΛV^{<=c})^k -> (ΛV^{<=c})^{k+1}, by dense elimination.
bool dense_exact(const SullivanModel& m, int k, int cutoff, const Polynomial& target)
{
    const RationalMatrix d = coboundary_matrix(m, k, cutoff);
    const DegreeBasis rows(m.generators(), m.generators().prefix(cutoff), k + 1);
    EXPECT_EQ(d.rows(), rows.size());
    return solve(d, coordinates(target, rows)).has_value();
}

}  // namespace

TEST(Coherence, IdentityLifts)
{
    for (const std::string label : {"V-ex31", "W-ex32", "U2"}) {
        const ModelPtr m = load_builtin(label);
        const LiftResult r = try_lift(GradedLinearMap::identity(m));
        ASSERT_TRUE(r.ok()) << label;
        EXPECT_EQ(*r.morphism, CochainMorphism::identity(m));
    }
}

TEST(Coherence, SignAutomorphismLiftsAndInverts)
{
    const ModelPtr v = load_builtin("V-ex31");
    const auto xi = GradedLinearMap::diagonal(v, diag(kV, q({1, -1, -1, 1, -1, 1})));
    const CoherenceVerdict verdict = is_coherent(xi);
    ASSERT_TRUE(verdict.coherent);
    EXPECT_EQ(verdict.label, "coherent (witness found)");
    EXPECT_EQ(induced_on_indecomposables(*verdict.lift.morphism), xi);
    const InverseLift inv = invert_coherent(xi, *verdict.lift.morphism);
    EXPECT_EQ(inv.xi, xi);
    EXPECT_EQ(compose(inv.xi, xi), GradedLinearMap::identity(v));
}

TEST(Coherence, ObstructionAtTheTopGenerator)
{
    const ModelPtr v = load_builtin("V-ex31");
    const auto xi = GradedLinearMap::diagonal(v, diag(kV, q({1, 1, 1, 1, 1, 2})));
    const CoherenceVerdict verdict = is_coherent(xi);
    ASSERT_FALSE(verdict.coherent);
    EXPECT_EQ(verdict.label, "obstructed along canonical branch");
    const Obstruction& o = *verdict.lift.obstruction;
    EXPECT_EQ(o.degree, 119);
    EXPECT_EQ(o.generator_name, "z");
    EXPECT_EQ(o.class_coordinates.size(), 3u);
    EXPECT_FALSE(dense_exact(*v, 119, 118, o.difference));
}

// Every obstruction is a genuine non-coboundary and every lift is a cochain map,
// over a grid of diagonal maps of the example.
TEST(Coherence, ObstructionSoundnessOnRandomDiagonals)
{
    const ModelPtr v = load_builtin("V-ex31");
    const MonomialConstraintSystem s = extract_constraints(*v);
    Gen gen(31);
    const Rational values[] = {Rational(0), Rational(1), Rational(-1), Rational(2), Rational(1, 2)};
    int lifted = 0, obstructed = 0;
    for (int trial = 0; trial < 150; ++trial) {
        std::vector<Rational> p(kV.size());
        for (auto& x : p)
            x = values[gen.integer(0, 4)];
        if (trial % 3 == 0) {
            // propagate the low variables so that some candidates are solutions
            p[2] = p[0] * p[0] * p[0] * p[1];
            p[3] = p[0] * p[0] * p[1] * p[1];
            p[4] = p[0] * p[1] * p[1] * p[1];
            p[5] = 1;
            for (int i = 0; i < 12; ++i)
                p[5] *= p[0];
        }
        const LiftResult r = try_lift(GradedLinearMap::diagonal(v, diag(kV, p)));
        EXPECT_EQ(r.ok(), satisfies(s, p));
        if (r.ok()) {
            ++lifted;
            continue;
        }
        ++obstructed;
        const Obstruction& o = *r.obstruction;
        EXPECT_FALSE(dense_exact(*v, o.degree, o.degree - 1, o.difference));
    }
    EXPECT_GT(lifted, 0);
    EXPECT_GT(obstructed, 0);
}

TEST(Coherence, GapReports)
{
    const GapReport v = gap_report(*load_builtin("V-ex31"));
    ASSERT_EQ(v.rows.size(), 6u);
    EXPECT_EQ(v.rows.back().degree, 119);
    EXPECT_EQ(v.rows.back().dimension, 3u);
    for (std::size_t i = 0; i + 1 < v.rows.size(); ++i)
        EXPECT_EQ(v.rows[i].dimension, 0u);
    EXPECT_FALSE(v.unique_lifts());
    const GapReport w = gap_report(*load_builtin("W-ex32"));
    EXPECT_EQ(w.rows.back().dimension, 96u);
}

TEST(Coherence, LinearMapAlgebra)
{
    const ModelPtr v = load_builtin("V-ex31");
    const auto a = GradedLinearMap::diagonal(v, diag(kV, q({2, 3, 24, 36, 54, 4096})));
    const auto b = inverse(a);
    EXPECT_EQ(compose(a, b), GradedLinearMap::identity(v));
    EXPECT_THROW(inverse(GradedLinearMap::diagonal(v, diag(kV, q({0, 1, 1, 1, 1, 1})))), Error);
    GradedLinearMap c(v, v);
    EXPECT_THROW(c.set_block(10, RationalMatrix(2, 1)), Error);
}

TEST(Coherence, NonDiagonalModelNeedsMatrices)
{
    const auto m = std::make_shared<const SullivanModel>(
        parse_model("model two;\ngen a : 2;\ngen b : 2;\ngen c : 3;\nd c = a*b;\n"));
    EXPECT_THROW(GradedLinearMap::diagonal(m, {{2, Rational(1)}, {3, Rational(1)}}), Error);
    GradedLinearMap swap(m, m);
    swap.set_block(2, RationalMatrix::from_rows({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}));
    swap.set_block(3, RationalMatrix::identity(1));
    EXPECT_TRUE(try_lift(swap).ok());
    GradedLinearMap bad = swap;
    bad.set_block(3, RationalMatrix::from_rows({{Rational(2)}}));
    EXPECT_FALSE(try_lift(bad).ok());
}
