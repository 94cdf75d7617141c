#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcca {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "a", "-a" or "a/b" into a canonical rational.
inline Rational parse_rational(std::string_view text)
{
    Rational q;
    if (text.empty() || q.set_str(std::string(text), 10) != 0)
        throw Error("not a rational number: '" + std::string(text) + "'");
    if (q.get_den() == 0)
        throw Error("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace mcca
