#include "mcca/cohomology.hpp"
#include "mcca/dsl.hpp"

#include <gtest/gtest.h>

using namespace mcca;

namespace {

// dim ker d^k - rank d^{k-1} from the dense matrices.
std::size_t dense_dimension(const SullivanModel& m, int k, int cutoff)
{
    const RationalMatrix out = coboundary_matrix(m, k, cutoff);
    const std::size_t kernel = out.cols() - rank(out);
    const std::size_t image = k > 0 ? rank(coboundary_matrix(m, k - 1, cutoff)) : 0;
    return kernel - image;
}

ModelPtr sphere2()
{
    return std::make_shared<const SullivanModel>(parse_model("model S2;\ngen x : 2;\ngen y : 3;\nd y = x^2;\n"));
}

}  // namespace

TEST(Cohomology, TwoSphere)
{
    const ModelPtr s = sphere2();
    EXPECT_EQ(cohomology(*s, 0).dimension(), 1u);
    EXPECT_EQ(cohomology(*s, 2).dimension(), 1u);
    for (int k : {3, 4, 5, 6, 7, 8})
        EXPECT_EQ(cohomology(*s, k).dimension(), 0u) << k;
}

TEST(Cohomology, DisplayedTruncatedClasses)
{
    const ModelPtr v = load_builtin("V-ex31");
    const GeneratorSet& g = v->generators();
    const struct {
        int k;
        const char* rep;
    } cases[] = {{42, "x1^3*x2"}, {44, "x1^2*x2^2"}, {46, "x1*x2^3"}};
    for (const auto& c : cases) {
        const CohomologyBasis b = cohomology(*v, c.k, c.k - 2);
        ASSERT_EQ(b.dimension(), 1u) << c.k;
        EXPECT_FALSE(class_of(*v, c.k, parse_polynomial(c.rep, g), c.k - 2).is_zero());
        // Once y_i is present the class dies.
        EXPECT_TRUE(class_of(*v, c.k, parse_polynomial(c.rep, g)).is_zero());
    }
}

TEST(Cohomology, TopTruncationOfV)
{
    const ModelPtr v = load_builtin("V-ex31");
    const GeneratorSet& g = v->generators();
    const CohomologyBasis b = cohomology(*v, 120, 118);
    EXPECT_EQ(b.dimension(), 3u);
    EXPECT_EQ(b.dimension(), dense_dimension(*v, 120, 118));
    RationalMatrix coords(3, 3);
    const char* shown[] = {"y1*y2*x2^3 - y1*y3*x1*x2^2 + y2*y3*x1^2*x2", "x1^12", "x2^10"};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto c = class_of(*v, 120, parse_polynomial(shown[i], g), 118);
        for (std::size_t j = 0; j < 3; ++j)
            coords(i, j) = c.coordinates[j];
    }
    EXPECT_EQ(rank(coords), 3u);
}

TEST(Cohomology, TopTruncationOfW)
{
    const ModelPtr w = load_builtin("W-ex32");
    const std::size_t dim = cohomology(*w, 120, 118).dimension();
    EXPECT_EQ(dim, dense_dimension(*w, 120, 118));
    EXPECT_EQ(dim, 29u);
}

TEST(Cohomology, SparseAgreesWithDenseOracle)
{
    for (const std::string label : {"V-ex31", "W-ex32", "E3", "U1"}) {
        const ModelPtr m = load_builtin(label);
        for (int k = 2; k <= 50; ++k)
            for (int cutoff : {kNoCutoff, k - 2, k - 1, 12})
                EXPECT_EQ(cohomology(*m, k, cutoff).dimension(), dense_dimension(*m, k, cutoff))
                    << label << " k=" << k << " cutoff=" << cutoff;
        release_cache(*m);
    }
}

TEST(Cohomology, EulerCharacteristicOfCounts)
{
    const ModelPtr v = load_builtin("V-ex31");
    for (int k = 2; k <= 60; ++k) {
        const CohomologyBasis b = cohomology(*v, k);
        EXPECT_EQ(b.dimension(), b.cocycles - b.coboundaries);
    }
}

TEST(Cohomology, ClassOfRejectsNonCocycles)
{
    const ModelPtr v = load_builtin("V-ex31");
    const GeneratorSet& g = v->generators();
    EXPECT_THROW(class_of(*v, 41, parse_polynomial("y1", g)), NotACocycle);
    EXPECT_THROW(class_of(*v, 120, parse_polynomial("x2^10", g), 11), Error);
}

TEST(Cohomology, CoboundaryClassesVanish)
{
    const ModelPtr w = load_builtin("W-ex32");
    const GeneratorSet& g = w->generators();
    for (const char* e : {"y1*x0", "y2*x1", "y1*y2*y3*x0^3", "z*x0"}) {
        const Polynomial u = parse_polynomial(e, g);
        const int k = *u.homogeneous_degree() + 1;
        EXPECT_TRUE(class_of(*w, k, apply_differential(*w, u)).is_zero()) << e;
    }
}

TEST(Cohomology, PairComplexCountsMatchLongExactSequence)
{
    // dim H^k(pair) from the monomials that use a generator of degree n or n+1;
    // the short exact sequence of complexes bounds it by the neighbouring terms.
    const ModelPtr v = load_builtin("V-ex31");
    for (int n : {41, 43, 45}) {
        const std::size_t pair = pair_cohomology_dimension(*v, n, n + 1);
        const std::size_t big = cohomology(*v, n + 1, n + 1).dimension();
        const std::size_t small_next = cohomology(*v, n + 2, n - 1).dimension();
        EXPECT_LE(pair, big + small_next) << n;
    }
}

TEST(Cohomology, InducedIdentity)
{
    const ModelPtr v = load_builtin("V-ex31");
    const auto id = CochainMorphism::identity(v);
    const RationalMatrix h = induced_map(id, 120, 118);
    EXPECT_EQ(h, RationalMatrix::identity(3));
}
