#include "mcca/dsl.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace mcca;

namespace {

ParseError parse_error(const std::string& text)
{
    try {
        parse_model(text, "t.mcca");
    }
    catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return ParseError("", 0, 0, 0, "");
}

}  // namespace

TEST(Dsl, ParsesAndCanonicalizes)
{
    const SullivanModel m = parse_model(R"(# two generators
model tiny;
gen a : 2;
gen b : 3;
gen c : 6;
d c = a^2*b - 1/2*b*a^2 + a*b*a;
)");
    EXPECT_EQ(m.label(), "tiny");
    EXPECT_EQ(m.differential(m.generators().index("c")).to_string(m.generators()), "3/2*a^2*b");
}

TEST(Dsl, PrecedenceOfPowerOverProduct)
{
    const SullivanModel m = parse_model("model p;\ngen a : 2;\ngen b : 4;\ngen c : 9;\nd c = 2*a^3*b;\n");
    EXPECT_EQ(m.differential(2).to_string(m.generators()), "2*a^3*b");
}

TEST(Dsl, RoundTripOnAllBuiltins)
{
    for (const auto& label : builtin_labels()) {
        const ModelPtr m = load_builtin(label);
        const std::string text = serialize(*m);
        const SullivanModel again = parse_model(text, label);
        EXPECT_TRUE(again.same_algebra(*m)) << label;
        EXPECT_EQ(again.label(), label);
        EXPECT_EQ(again.vanished_terms(), m->vanished_terms()) << label;
        EXPECT_EQ(serialize(again), text) << label;
    }
}

TEST(Dsl, BuiltinW)
{
    const ModelPtr w = load_builtin("W-ex32");
    EXPECT_EQ(w->generators().size(), 7u);
    EXPECT_EQ(w->generators()[w->generators().index("x0")].degree, 2);
    EXPECT_THROW(load_builtin("bogus"), Error);
    EXPECT_EQ(load_builtin("W-ex32"), w);
}

TEST(Dsl, OddPowerIsKeptAsNote)
{
    const ModelPtr u1 = load_builtin("U1");
    ASSERT_EQ(u1->vanished_terms().size(), 1u);
    EXPECT_EQ(u1->vanished_terms()[0].term, "x3^40");
}

TEST(Dsl, UnknownGeneratorPosition)
{
    const ParseError e = parse_error("model m;\ngen a : 2;\ngen c : 5;\nd c = a*q;\n");
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 9);
    EXPECT_NE(e.message().find("unknown generator 'q'"), std::string::npos);
}

TEST(Dsl, DegreeMismatchNamesBothDegrees)
{
    const ParseError e = parse_error("model m;\ngen a : 2;\ngen c : 5;\nd c = a^2;\n");
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 7);
    EXPECT_NE(e.message().find("degree 4 ≠ 6"), std::string::npos);
}

TEST(Dsl, OtherErrors)
{
    EXPECT_EQ(parse_error("gen a : 2;\n").line(), 1);
    EXPECT_NE(parse_error("model m;\ngen a : 2;\ngen a : 4;\n").message().find("a"), std::string::npos);
    EXPECT_NE(parse_error("model m;\ngen a : 2;\ngen c : 3;\nd c = 1;\n").message().find("constant"),
              std::string::npos);
    EXPECT_NE(parse_error("model m;\ngen a : 2;\ngen c : 3;\nd c = 0;\nd c = 0;\n").message().find("second"),
              std::string::npos);
    EXPECT_EQ(parse_error("model m;\ngen a : 2;\ngen c : 5;\nd c = a^2 +;\n").line(), 4);
}

TEST(Dsl, LoadsFiles)
{
    const auto path = std::filesystem::temp_directory_path() / "mcca_dsl_test.mcca";
    {
        std::ofstream f(path);
        f << serialize(*load_builtin("V-ex31"));
    }
    const ModelPtr m = load_model(path.string());
    EXPECT_TRUE(m->same_algebra(*load_builtin("V-ex31")));
    std::filesystem::remove(path);
    EXPECT_THROW(load_model(path.string()), Error);
}

TEST(Dsl, PolynomialExpressions)
{
    const ModelPtr v = load_builtin("V-ex31");
    const GeneratorSet& g = v->generators();
    EXPECT_EQ(parse_polynomial("x2*x1^3", g), v->differential(g.index("y1")));
    EXPECT_TRUE(parse_polynomial("y1*y1", g).is_zero());
    EXPECT_EQ(parse_polynomial("y2*y1", g), -parse_polynomial("y1*y2", g));
    EXPECT_THROW(parse_polynomial("x1 +", g), ParseError);
}
