#include "mcca/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace mcca {

ParseError::ParseError(std::string filename, int line, int column, int length, std::string message)
    : Error(filename + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      filename_(std::move(filename)), line_(line), column_(column), length_(length), message_(std::move(message))
{
}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1, column = 1;
    std::size_t offset = 0;
};

class Lexer {
public:
    Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

    Token next()
    {
        skip_space();
        Token t;
        t.line = line_;
        t.column = col_;
        t.offset = pos_;
        if (pos_ >= src_.size())
            return t;
        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::Ident;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                t.text += advance();
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::Number;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                t.text += advance();
            return t;
        }
        if (std::string_view(";:=+-*^/").find(c) != std::string_view::npos) {
            t.kind = Tok::Symbol;
            t.text = std::string(1, advance());
            return t;
        }
        throw ParseError(file_, line_, col_, 1, std::string("unexpected character '") + c + "'");
    }

    // Raw text up to the next ';' (used for model labels).
    Token raw_until_semicolon()
    {
        skip_space();
        Token t;
        t.kind = Tok::Ident;
        t.line = line_;
        t.column = col_;
        t.offset = pos_;
        while (pos_ < src_.size() && src_[pos_] != ';' && src_[pos_] != '\n' && src_[pos_] != '#')
            t.text += advance();
        while (!t.text.empty() && std::isspace(static_cast<unsigned char>(t.text.back())))
            t.text.pop_back();
        return t;
    }

private:
    char advance()
    {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        }
        else {
            ++col_;
        }
        return c;
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            }
            else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            }
            else {
                break;
            }
        }
    }

    std::string_view src_;
    const std::string& file_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(std::string_view src, const std::string& file) : src_(src), file_(file), lex_(src, file) { bump(); }

    SullivanModel run()
    {
        if (!is_keyword("model"))
            error(tok_, "expected 'model'");
        // The lexer stands right after `model`: labels may contain '-', '+', '^'.
        Token label = lex_.raw_until_semicolon();
        if (label.text.empty() || label.text.find_first_of(" \t") != std::string::npos)
            error(label, "expected a model label without spaces");
        bump();
        expect_symbol(";");

        while (tok_.kind != Tok::End) {
            if (is_keyword("gen"))
                parse_gen();
            else if (is_keyword("d"))
                parse_diff();
            else
                error(tok_, "expected 'gen' or 'd', found '" + tok_.text + "'");
        }

        GeneratorSet gens(decls_);
        std::vector<Polynomial> diff(gens.size());
        std::vector<VanishedTerm> notes;
        for (auto& line : lines_) {
            const std::size_t g = gens.index(line.generator);
            const int want = gens[g].degree + 1;
            for (auto& term : line.terms) {
                int degree = 0;
                std::vector<std::pair<std::size_t, int>> word;
                for (const auto& [name, exp] : term.word) {
                    const std::size_t i = gens.index(name);
                    degree += gens[i].degree * exp;
                    word.emplace_back(i, exp);
                }
                if (degree != want)
                    throw ParseError(file_, term.start.line, term.start.column, term.length,
                                     "degree " + std::to_string(degree) + " ≠ " + std::to_string(want) +
                                         " in d(" + line.generator + ")");
                auto mono = canonicalize(word, gens);
                if (!mono) {
                    notes.push_back(VanishedTerm{line.generator, term.text});
                    continue;
                }
                Rational c = term.coefficient;
                if (mono->sign < 0)
                    c = -c;
                diff[g].add_term(mono->monomial, c);
            }
        }
        return SullivanModel(label.text, std::move(gens), std::move(diff), std::move(notes));
    }

private:
    struct Term {
        Rational coefficient{1};
        std::vector<std::pair<std::string, int>> word;
        Token start;
        int length = 0;
        std::string text;
    };
    struct DiffLine {
        std::string generator;
        std::vector<Term> terms;
    };

    void bump() { tok_ = lex_.next(); }

    [[noreturn]] void error(const Token& t, const std::string& msg)
    {
        throw ParseError(file_, t.line, t.column, std::max<int>(1, static_cast<int>(t.text.size())), msg);
    }

    bool is_keyword(const char* kw) const { return tok_.kind == Tok::Ident && tok_.text == kw; }
    bool is_symbol(const char* s) const { return tok_.kind == Tok::Symbol && tok_.text == s; }

    void expect_keyword(const char* kw)
    {
        if (!is_keyword(kw))
            error(tok_, std::string("expected '") + kw + "'");
        bump();
    }
    void expect_symbol(const char* s)
    {
        if (!is_symbol(s))
            error(tok_, std::string("expected '") + s + "'" +
                            (tok_.kind == Tok::End ? " at end of input" : ", found '" + tok_.text + "'"));
        bump();
    }
    Token expect_ident()
    {
        if (tok_.kind != Tok::Ident)
            error(tok_, "expected an identifier");
        Token t = tok_;
        bump();
        return t;
    }
    int expect_int()
    {
        if (tok_.kind != Tok::Number)
            error(tok_, "expected an integer");
        Token t = tok_;
        bump();
        if (t.text.size() > 6)
            error(t, "integer too large");
        return std::stoi(t.text);
    }

    void parse_gen()
    {
        bump();
        Token name = expect_ident();
        expect_symbol(":");
        Token at = tok_;
        int degree = expect_int();
        if (degree < 1)
            error(at, "generator degree must be positive");
        expect_symbol(";");
        if (declared_.count(name.text))
            error(name, "generator '" + name.text + "' declared twice");
        declared_.emplace(name.text, degree);
        decls_.push_back(Generator{name.text, degree});
    }

    void parse_diff()
    {
        bump();
        Token name = expect_ident();
        if (!declared_.count(name.text))
            error(name, "unknown generator '" + name.text + "'");
        if (has_diff_.count(name.text))
            error(name, "second differential for '" + name.text + "'");
        has_diff_.insert({name.text, true});
        expect_symbol("=");
        DiffLine line{name.text, {}};
        for (Term& t : parse_sum()) {
            if (!t.word.empty())
                line.terms.push_back(std::move(t));
            else
                throw ParseError(file_, t.start.line, t.start.column, t.length,
                                 "constant term in a differential (degree 0 ≠ " +
                                     std::to_string(declared_.at(name.text) + 1) + ")");
        }
        expect_symbol(";");
        lines_.push_back(std::move(line));
    }

    // Nonzero terms of a signed sum.
    std::vector<Term> parse_sum()
    {
        std::vector<Term> out;
        bool first = true;
        for (;;) {
            int sign = 1;
            if (is_symbol("+") || is_symbol("-")) {
                sign = is_symbol("-") ? -1 : 1;
                bump();
            }
            else if (!first) {
                break;
            }
            first = false;
            Term t = parse_term();
            t.coefficient *= sign;
            if (t.coefficient != 0)
                out.push_back(std::move(t));
        }
        return out;
    }

public:
    Polynomial expression(const GeneratorSet& gens)
    {
        for (const auto& g : gens)
            declared_.emplace(g.name, g.degree);
        std::vector<Term> terms = parse_sum();
        if (tok_.kind != Tok::End)
            error(tok_, "unexpected '" + tok_.text + "'");
        Polynomial p;
        for (const auto& term : terms) {
            std::vector<std::pair<std::size_t, int>> word;
            for (const auto& [name, exp] : term.word)
                word.emplace_back(gens.index(name), exp);
            auto mono = canonicalize(word, gens);
            if (mono)
                p.add_term(mono->monomial, mono->sign < 0 ? Rational(-term.coefficient) : term.coefficient);
        }
        return p;
    }

private:

    Term parse_term()
    {
        Term t;
        t.start = tok_;
        std::size_t end = tok_.offset;
        for (;;) {
            if (tok_.kind == Tok::Number) {
                Token num = tok_;
                bump();
                Rational q{Integer(num.text)};
                end = num.offset + num.text.size();
                if (is_symbol("/")) {
                    bump();
                    if (tok_.kind != Tok::Number)
                        error(tok_, "expected a denominator");
                    Integer den(tok_.text);
                    if (den == 0)
                        error(tok_, "zero denominator");
                    q /= Rational(den);
                    end = tok_.offset + tok_.text.size();
                    bump();
                }
                t.coefficient *= q;
            }
            else if (tok_.kind == Tok::Ident) {
                Token id = tok_;
                if (!declared_.count(id.text))
                    error(id, "unknown generator '" + id.text + "'");
                bump();
                int exp = 1;
                end = id.offset + id.text.size();
                if (is_symbol("^")) {
                    bump();
                    Token e = tok_;
                    exp = expect_int();
                    if (exp < 1)
                        error(e, "exponent must be >= 1");
                    end = e.offset + e.text.size();
                }
                t.word.emplace_back(id.text, exp);
            }
            else {
                error(tok_, tok_.kind == Tok::End ? "unexpected end of input" : "unexpected '" + tok_.text + "'");
            }
            if (!is_symbol("*"))
                break;
            bump();
        }
        t.text = std::string(src_.substr(t.start.offset, end - t.start.offset));
        t.length = static_cast<int>(end - t.start.offset);
        return t;
    }

    std::string_view src_;
    const std::string& file_;
    Lexer lex_;
    Token tok_;
    std::vector<Generator> decls_;
    std::map<std::string, int> declared_;
    std::map<std::string, bool> has_diff_;
    std::vector<DiffLine> lines_;
};

const char* const kModelV = R"(# Example with two even and three odd generators below a closing generator z.
model V-ex31;
gen x1 : 10;
gen x2 : 12;
gen y1 : 41;
gen y2 : 43;
gen y3 : 45;
gen z : 119;
d y1 = x1^3*x2;
d y2 = x1^2*x2^2;
d y3 = x1*x2^3;
d z = y1*y2*x2^3 - y1*y3*x1*x2^2 + y2*y3*x1^2*x2 + x1^12 + x2^10;
)";

struct TowerSpec {
    const char* label;
    const char* parent;
    int degree;
    int exponent;
    const char* name;
};

// Tower built on top of the example by closing z with one more power each step.
const TowerSpec kTowers[] = {
    {"W-ex32", "V-ex31", 2, 60, "x0"},
    {"U1", "W-ex32", 3, 40, ""},
    {"U2", "U1", 4, 30, ""},
    {"U3", "U2", 5, 24, ""},
    {"U4", "U3", 6, 20, ""},
    {"U5", "U4", 15, 8, ""},
    {"U6", "U5", 20, 6, ""},
    {"U7", "U6", 30, 4, ""},
    {"U8", "U7", 60, 2, ""},
    {"E3", "W-ex32", 4, 30, ""},
    {"E4", "E3", 6, 20, ""},
    {"E5", "E4", 20, 6, ""},
    {"E6", "E5", 30, 4, ""},
    {"E7", "E6", 60, 2, ""},
};

SullivanModel relabel(const SullivanModel& m, std::string label)
{
    return SullivanModel(std::move(label), m.generators(), m.differentials(), m.vanished_terms());
}

}  // namespace

SullivanModel parse_model(std::string_view text, const std::string& filename)
{
    return Parser(text, filename).run();
}

Polynomial parse_polynomial(std::string_view expr, const GeneratorSet& gens)
{
    const std::string file = "<expression>";
    return Parser(expr, file).expression(gens);
}

std::string serialize(const SullivanModel& m)
{
    const GeneratorSet& gens = m.generators();
    std::ostringstream out;
    out << "model " << m.label() << ";\n";
    for (const auto& g : gens)
        out << "gen " << g.name << " : " << g.degree << ";\n";
    for (std::size_t i = 0; i < gens.size(); ++i) {
        std::string body = m.differential(i).is_zero() ? "" : m.differential(i).to_string(gens);
        for (const auto& v : m.vanished_terms())
            if (v.generator == gens[i].name)
                body += (body.empty() ? "" : " + ") + v.term;
        if (!body.empty())
            out << "d " << gens[i].name << " = " << body << ";\n";
    }
    return out.str();
}

const std::vector<std::string>& builtin_labels()
{
    static const std::vector<std::string> labels = {"V-ex31", "W-ex32", "U1", "U2", "U3", "U4", "U5", "U6", "U7",
                                                    "U8",     "E2",     "E3", "E4", "E5", "E6", "E7"};
    return labels;
}

ModelPtr load_builtin(const std::string& label)
{
    static std::mutex mutex;
    static std::map<std::string, ModelPtr> loaded;
    std::lock_guard lock(mutex);
    if (auto it = loaded.find(label); it != loaded.end())
        return it->second;

    std::function<ModelPtr(const std::string&)> build = [&](const std::string& l) -> ModelPtr {
        if (auto it = loaded.find(l); it != loaded.end())
            return it->second;
        ModelPtr m;
        if (l == "V-ex31") {
            m = std::make_shared<const SullivanModel>(parse_model(kModelV, "<builtin V-ex31>"));
        }
        else if (l == "E2") {
            m = std::make_shared<const SullivanModel>(relabel(*build("W-ex32"), "E2"));
        }
        else {
            const TowerSpec* spec = nullptr;
            for (const auto& t : kTowers)
                if (l == t.label)
                    spec = &t;
            if (!spec)
                throw Error("unknown builtin model '" + l + "'");
            ModelPtr parent = build(spec->parent);
            m = std::make_shared<const SullivanModel>(
                extend_tower(*parent, "z", TowerStep{spec->degree, spec->exponent, spec->name}, spec->label));
        }
        loaded.emplace(l, m);
        return m;
    };
    return build(label);
}

ModelPtr load_model(const std::string& label_or_path)
{
    const auto& labels = builtin_labels();
    if (std::find(labels.begin(), labels.end(), label_or_path) != labels.end())
        return load_builtin(label_or_path);
    std::ifstream in(label_or_path);
    if (!in)
        throw Error("'" + label_or_path + "' is neither a builtin model nor a readable file");
    std::stringstream buf;
    buf << in.rdbuf();
    return std::make_shared<const SullivanModel>(parse_model(buf.str(), label_or_path));
}

}  // namespace mcca
