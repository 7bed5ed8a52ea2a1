#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace probterm {

using Rational = mpq_class;

Rational power(const Rational& base, unsigned exponent);
Rational power(unsigned long base, unsigned exponent);

// Accepts "7", "-3/4" and decimal literals such as "0.25".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline int sign(const Rational& value) { return sgn(value); }
inline bool is_zero(const Rational& value) { return sgn(value) == 0; }
inline bool coefficient_is_zero(const Rational& value) { return sgn(value) == 0; }

Rational binomial(unsigned n, unsigned k);

}  // namespace probterm
