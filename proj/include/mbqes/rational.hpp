#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace mbqes {

// Exact rational arithmetic for quantum numbers and polynomial coefficients.
// Any finite double converts to a Rational without rounding.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

bool is_integer(const Rational& x);

// Throws std::domain_error when x is not an integer or does not fit in a long.
long to_long(const Rational& x);

inline double to_double(const Rational& x) { return x.get_d(); }

// Floor of an exact rational.
Integer floor(const Rational& x);

// "3/4", "-2", "0.125", "1e-3" and "-1.5e2" are all accepted and parsed
// exactly (decimal strings are not rounded through a double).
Rational parse_rational(std::string_view text);

// Comma separated list of rationals, e.g. "0,1/2,-0.25".
std::vector<Rational> parse_rational_list(std::string_view text);

std::string to_string(const Rational& x);

}  // namespace mbqes
