#pragma once

#include "mcca/algebra.hpp"
#include "mcca/linalg.hpp"

#include <random>
#include <vector>

namespace mcca::testing {

// Seeded per test so failures replay.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    Rational rational(int span = 5)
    {
        Rational q(integer(-span, span), integer(1, span));
        q.canonicalize();
        return q;
    }

    RationalMatrix rational_matrix(std::size_t rows, std::size_t cols, double density = 0.5)
    {
        RationalMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (coin(density))
                    m(i, j) = rational();
        return m;
    }

    IntegerMatrix integer_matrix(std::size_t rows, std::size_t cols, int span, double density = 0.6)
    {
        IntegerMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (coin(density))
                    m(i, j) = integer(-span, span);
        return m;
    }

    /// A random canonical monomial of at most `length` factors (possibly zero when
    /// an odd generator repeats; retried).
    Monomial monomial(const GeneratorSet& gens, int length)
    {
        for (;;) {
            std::vector<std::pair<std::size_t, int>> raw;
            const int n = integer(0, length);
            for (int k = 0; k < n; ++k)
                raw.emplace_back(static_cast<std::size_t>(integer(0, static_cast<int>(gens.size()) - 1)),
                                 integer(1, 2));
            if (auto m = canonicalize(raw, gens))
                return m->monomial;
        }
    }

    Polynomial polynomial(const GeneratorSet& gens, int terms, int length)
    {
        Polynomial p;
        for (int t = 0; t < terms; ++t)
            p.add_term(monomial(gens, length), rational());
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Coefficients of prod_{even d} 1/(1 - t^d) * prod_{odd d} (1 + t^d) up to t^top.
inline std::vector<Integer> hilbert_series(const GeneratorSet& gens, int top)
{
    std::vector<Integer> c(static_cast<std::size_t>(top) + 1);
    c[0] = 1;
    for (const auto& g : gens) {
        const std::size_t d = static_cast<std::size_t>(g.degree);
        if (g.odd()) {
            for (std::size_t k = c.size(); k-- > d;)
                c[k] += c[k - d];
        }
        else {
            for (std::size_t k = d; k < c.size(); ++k)
                c[k] += c[k - d];
        }
    }
    return c;
}

}  // namespace mcca::testing
