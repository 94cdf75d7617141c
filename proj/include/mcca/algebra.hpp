#pragma once

// Free graded-commutative algebra over Q on a finite set of generators.
//
// Generators are kept in a fixed global order (degree, then name). A monomial
// refers to generators by their index in that order, so the generators of
// degree <= n always form a prefix and a monomial of a truncation is literally
// a monomial of the parent algebra.

#include "mcca/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mcca {

struct Generator {
    std::string name;
    int degree = 0;

    bool odd() const { return degree % 2 != 0; }
    bool operator==(const Generator&) const = default;
};

/// Ordered generator list with name lookup.
class GeneratorSet {
public:
    GeneratorSet() = default;
    /// Sorts by (degree, name); throws on duplicate names or degree < 1.
    explicit GeneratorSet(std::vector<Generator> gens);

    std::size_t size() const { return gens_.size(); }
    bool empty() const { return gens_.empty(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& all() const { return gens_; }
    auto begin() const { return gens_.begin(); }
    auto end() const { return gens_.end(); }

    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index(const std::string& name) const;  // throws on unknown name

    /// Number of generators of degree <= n (they form a prefix).
    std::size_t prefix(int n) const;
    /// Indices of generators of exactly degree d.
    std::vector<std::size_t> of_degree(int d) const;
    int max_degree() const { return gens_.empty() ? 0 : gens_.back().degree; }

    bool operator==(const GeneratorSet& o) const { return gens_ == o.gens_; }

private:
    std::vector<Generator> gens_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

struct Factor {
    std::uint16_t gen = 0;
    std::uint16_t exp = 0;
    bool operator==(const Factor&) const = default;
};

/// Canonical monomial: factors sorted by generator index, odd exponents 1.
class Monomial {
public:
    Monomial() = default;  // the unit

    /// Builds from already canonical factors (sorted, no odd squares).
    Monomial(std::vector<Factor> factors, const GeneratorSet& gens);
    static Monomial generator(std::size_t gen, const GeneratorSet& gens);
    /// No validation; the caller supplies canonical factors and their degree.
    static Monomial unchecked(std::vector<Factor> factors, int degree);

    const std::vector<Factor>& factors() const { return factors_; }
    int degree() const { return degree_; }
    bool is_unit() const { return factors_.empty(); }
    /// Number of generator factors counted with multiplicity.
    int length() const;
    /// True when the monomial is a single generator to the first power.
    bool is_linear() const { return factors_.size() == 1 && factors_[0].exp == 1; }
    /// Highest generator index used, or -1 for the unit.
    int top_generator() const { return factors_.empty() ? -1 : factors_.back().gen; }
    std::uint16_t exponent(std::size_t gen) const;

    bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
    /// Degree first, then graded-lex: larger exponent on an earlier generator first.
    std::strong_ordering operator<=>(const Monomial& o) const;

    std::string to_string(const GeneratorSet& gens) const;

private:
    std::vector<Factor> factors_;
    int degree_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept;
};

/// Signed product of two canonical monomials; nullopt when it vanishes.
struct SignedMonomial {
    int sign = 1;
    Monomial monomial;
};
std::optional<SignedMonomial> multiply(const Monomial& a, const Monomial& b, const GeneratorSet& gens);

/// Sorts an arbitrary word of generator powers into canonical form.
/// Returns nullopt (zero) when an odd generator would get exponent >= 2.
std::optional<SignedMonomial> canonicalize(const std::vector<std::pair<std::size_t, int>>& raw,
                                           const GeneratorSet& gens);

/// Finite Q-linear combination of canonical monomials; zero coefficients never stored.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational>;

    Polynomial() = default;
    Polynomial(const Monomial& m, Rational c = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coefficient(const Monomial& m) const;

    /// Degree when homogeneous (0 for the zero polynomial), nullopt otherwise.
    std::optional<int> homogeneous_degree() const;

    void add_term(const Monomial& m, const Rational& c);
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    Polynomial operator-() const { return *this * Rational(-1); }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    /// Terms in monomial order, e.g. "x1^3*x2 - 3/2*y1".
    std::string to_string(const GeneratorSet& gens) const;

private:
    Terms terms_;
};

Polynomial multiply(const Polynomial& a, const Polynomial& b, const GeneratorSet& gens);
Polynomial power(const Polynomial& p, int e, const GeneratorSet& gens);

/// All canonical monomials of degree d using only the first `prefix` generators,
/// in graded-lex order. basis(...,0) = {unit}.
std::vector<Monomial> basis(const GeneratorSet& gens, std::size_t prefix, int degree);
inline std::vector<Monomial> basis(const GeneratorSet& gens, int degree)
{
    return basis(gens, gens.size(), degree);
}

/// Ordered monomial basis with an index for coordinate lookup.
class DegreeBasis {
public:
    DegreeBasis() = default;
    DegreeBasis(const GeneratorSet& gens, std::size_t prefix, int degree);

    int degree() const { return degree_; }
    std::size_t size() const { return monomials_.size(); }
    const Monomial& operator[](std::size_t i) const { return monomials_[i]; }
    const std::vector<Monomial>& monomials() const { return monomials_; }
    std::optional<std::size_t> index_of(const Monomial& m) const;

private:
    int degree_ = 0;
    std::vector<Monomial> monomials_;
    std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

/// Coordinates of a homogeneous polynomial of degree `basis.degree()`.
/// Throws when p is not homogeneous of that degree.
std::vector<Rational> coordinates(const Polynomial& p, const DegreeBasis& basis);
Polynomial from_coordinates(const std::vector<Rational>& v, const DegreeBasis& basis);

}  // namespace mcca
