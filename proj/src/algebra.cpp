#include "mcca/algebra.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mcca {

GeneratorSet::GeneratorSet(std::vector<Generator> gens) : gens_(std::move(gens))
{
    std::sort(gens_.begin(), gens_.end(), [](const Generator& a, const Generator& b) {
        return a.degree != b.degree ? a.degree < b.degree : a.name < b.name;
    });
    if (gens_.size() > 0xFFFF)
        throw Error("too many generators");
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].degree < 1)
            throw Error("generator '" + gens_[i].name + "' has non-positive degree");
        if (!by_name_.emplace(gens_[i].name, i).second)
            throw Error("duplicate generator '" + gens_[i].name + "'");
    }
}

std::optional<std::size_t> GeneratorSet::find(const std::string& name) const
{
    auto it = by_name_.find(name);
    if (it == by_name_.end())
        return std::nullopt;
    return it->second;
}

std::size_t GeneratorSet::index(const std::string& name) const
{
    if (auto i = find(name))
        return *i;
    throw Error("unknown generator '" + name + "'");
}

std::size_t GeneratorSet::prefix(int n) const
{
    auto it = std::upper_bound(gens_.begin(), gens_.end(), n,
                               [](int d, const Generator& g) { return d < g.degree; });
    return static_cast<std::size_t>(it - gens_.begin());
}

std::vector<std::size_t> GeneratorSet::of_degree(int d) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = prefix(d - 1); i < gens_.size() && gens_[i].degree == d; ++i)
        out.push_back(i);
    return out;
}

Monomial::Monomial(std::vector<Factor> factors, const GeneratorSet& gens) : factors_(std::move(factors))
{
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const Factor& f = factors_[i];
        if (f.gen >= gens.size() || f.exp == 0)
            throw Error("malformed monomial factor");
        if (i > 0 && factors_[i - 1].gen >= f.gen)
            throw Error("monomial factors not in canonical order");
        if (gens[f.gen].odd() && f.exp > 1)
            throw Error("odd generator '" + gens[f.gen].name + "' with exponent > 1");
        degree_ += gens[f.gen].degree * f.exp;
    }
}

Monomial Monomial::generator(std::size_t gen, const GeneratorSet& gens)
{
    return Monomial({Factor{static_cast<std::uint16_t>(gen), 1}}, gens);
}

Monomial Monomial::unchecked(std::vector<Factor> factors, int degree)
{
    Monomial m;
    m.factors_ = std::move(factors);
    m.degree_ = degree;
    return m;
}

int Monomial::length() const
{
    int n = 0;
    for (const Factor& f : factors_)
        n += f.exp;
    return n;
}

std::uint16_t Monomial::exponent(std::size_t gen) const
{
    for (const Factor& f : factors_)
        if (f.gen == gen)
            return f.exp;
    return 0;
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const
{
    if (degree_ != o.degree_)
        return degree_ <=> o.degree_;
    std::size_t i = 0, j = 0;
    while (i < factors_.size() && j < o.factors_.size()) {
        const Factor& a = factors_[i];
        const Factor& b = o.factors_[j];
        if (a.gen == b.gen) {
            if (a.exp != b.exp)
                return b.exp <=> a.exp;
            ++i;
            ++j;
        }
        else {
            return a.gen < b.gen ? std::strong_ordering::less : std::strong_ordering::greater;
        }
    }
    if (i < factors_.size())
        return std::strong_ordering::less;
    if (j < o.factors_.size())
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Monomial::to_string(const GeneratorSet& gens) const
{
    if (factors_.empty())
        return "1";
    std::string s;
    for (const Factor& f : factors_) {
        if (!s.empty())
            s += '*';
        s += gens[f.gen].name;
        if (f.exp > 1)
            s += '^' + std::to_string(f.exp);
    }
    return s;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept
{
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const Factor& f : m.factors()) {
        h ^= (std::size_t(f.gen) << 16) | f.exp;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::optional<SignedMonomial> multiply(const Monomial& a, const Monomial& b, const GeneratorSet& gens)
{
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::vector<Factor> out;
    out.reserve(fa.size() + fb.size());
    // Moving an odd factor of b left past the odd factors of a with larger index.
    int odd_a_remaining = 0;
    for (const Factor& f : fa)
        odd_a_remaining += gens[f.gen].odd() ? 1 : 0;
    int swaps = 0;
    std::size_t i = 0, j = 0;
    while (i < fa.size() || j < fb.size()) {
        if (j == fb.size() || (i < fa.size() && fa[i].gen < fb[j].gen)) {
            if (gens[fa[i].gen].odd())
                --odd_a_remaining;
            out.push_back(fa[i++]);
        }
        else if (i == fa.size() || fb[j].gen < fa[i].gen) {
            if (gens[fb[j].gen].odd())
                swaps += odd_a_remaining;
            out.push_back(fb[j++]);
        }
        else {
            if (gens[fa[i].gen].odd())
                return std::nullopt;
            out.push_back(Factor{fa[i].gen, static_cast<std::uint16_t>(fa[i].exp + fb[j].exp)});
            ++i;
            ++j;
        }
    }
    return SignedMonomial{swaps % 2 == 0 ? 1 : -1, Monomial::unchecked(std::move(out), a.degree() + b.degree())};
}

std::optional<SignedMonomial> canonicalize(const std::vector<std::pair<std::size_t, int>>& raw,
                                           const GeneratorSet& gens)
{
    SignedMonomial acc;
    for (const auto& [gen, exp] : raw) {
        if (gen >= gens.size())
            throw Error("unknown generator index " + std::to_string(gen));
        if (exp < 1)
            throw Error("exponent must be >= 1");
        if (gens[gen].odd() && exp > 1)
            return std::nullopt;
        auto g = Monomial::unchecked({Factor{static_cast<std::uint16_t>(gen), static_cast<std::uint16_t>(exp)}},
                                     gens[gen].degree * exp);
        auto prod = multiply(acc.monomial, g, gens);
        if (!prod)
            return std::nullopt;
        acc.sign *= prod->sign;
        acc.monomial = std::move(prod->monomial);
    }
    return acc;
}

Polynomial::Polynomial(const Monomial& m, Rational c)
{
    if (c != 0)
        terms_.emplace(m, std::move(c));
}

Rational Polynomial::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<int> Polynomial::homogeneous_degree() const
{
    if (terms_.empty())
        return 0;
    int d = terms_.begin()->first.degree();
    if (terms_.rbegin()->first.degree() != d)
        return std::nullopt;
    return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o)
{
    for (const auto& [m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coef] : terms_)
        coef *= c;
    return *this;
}

std::string Polynomial::to_string(const GeneratorSet& gens) const
{
    if (terms_.empty())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = abs(c);
        if (first)
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        first = false;
        if (m.is_unit()) {
            s += a.get_str();
        }
        else {
            if (a != 1)
                s += a.get_str() + "*";
            s += m.to_string(gens);
        }
    }
    return s;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b, const GeneratorSet& gens)
{
    Polynomial out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            auto prod = multiply(ma, mb, gens);
            if (!prod)
                continue;
            Rational c = ca * cb;
            if (prod->sign < 0)
                c = -c;
            out.add_term(prod->monomial, c);
        }
    return out;
}

Polynomial power(const Polynomial& p, int e, const GeneratorSet& gens)
{
    Polynomial result{Monomial{}};
    Polynomial base = p;
    while (e > 0) {
        if (e & 1)
            result = multiply(result, base, gens);
        e >>= 1;
        if (e > 0)
            base = multiply(base, base, gens);
    }
    return result;
}

std::vector<Monomial> basis(const GeneratorSet& gens, std::size_t prefix, int degree)
{
    std::vector<Monomial> out;
    if (degree < 0)
        return out;
    prefix = std::min(prefix, gens.size());
    std::vector<Factor> current;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
        if (remaining == 0) {
            out.push_back(Monomial::unchecked(current, degree));
            return;
        }
        if (i == prefix)
            return;
        const int d = gens[i].degree;
        int max_exp = remaining / d;
        if (gens[i].odd())
            max_exp = std::min(max_exp, 1);
        for (int e = max_exp; e >= 0; --e) {
            if (e > 0)
                current.push_back(Factor{static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(e)});
            rec(i + 1, remaining - e * d);
            if (e > 0)
                current.pop_back();
        }
    };
    rec(0, degree);
    return out;
}

DegreeBasis::DegreeBasis(const GeneratorSet& gens, std::size_t prefix, int degree)
    : degree_(degree), monomials_(basis(gens, prefix, degree))
{
    index_.reserve(monomials_.size());
    for (std::size_t i = 0; i < monomials_.size(); ++i)
        index_.emplace(monomials_[i], i);
}

std::optional<std::size_t> DegreeBasis::index_of(const Monomial& m) const
{
    auto it = index_.find(m);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Rational> coordinates(const Polynomial& p, const DegreeBasis& basis)
{
    std::vector<Rational> v(basis.size());
    for (const auto& [m, c] : p.terms()) {
        if (m.degree() != basis.degree())
            throw Error("polynomial is not homogeneous of degree " + std::to_string(basis.degree()));
        auto i = basis.index_of(m);
        if (!i)
            throw Error("monomial outside the basis of degree " + std::to_string(basis.degree()));
        v[*i] = c;
    }
    return v;
}

Polynomial from_coordinates(const std::vector<Rational>& v, const DegreeBasis& basis)
{
    if (v.size() != basis.size())
        throw Error("coordinate vector has wrong length");
    Polynomial p;
    for (std::size_t i = 0; i < v.size(); ++i)
        p.add_term(basis[i], v[i]);
    return p;
}

}  // namespace mcca
