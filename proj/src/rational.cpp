#include "probterm/rational.hpp"

#include <stdexcept>

namespace probterm {

Rational power(const Rational& base, unsigned exponent) {
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  result.canonicalize();
  return result;
}

Rational power(unsigned long base, unsigned exponent) {
  Rational result;
  mpz_ui_pow_ui(result.get_num_mpz_t(), base, exponent);
  return result;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    bool negative = s[0] == '-';
    std::string digits = s.substr(negative ? 1 : 0);
    dot = digits.find('.');
    std::string whole = digits.substr(0, dot);
    std::string frac = digits.substr(dot + 1);
    if ((whole + frac).empty() || (whole + frac).find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed decimal literal: " + s);
    Rational value(mpz_class(whole.empty() ? "0" : whole), 1);
    if (!frac.empty()) {
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
      value += Rational(mpz_class(frac), scale);
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
  }
  Rational value;
  if (value.set_str(s, 10) != 0 || value.get_den() == 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational binomial(unsigned n, unsigned k) {
  mpz_class result;
  mpz_bin_uiui(result.get_mpz_t(), n, k);
  return Rational(result);
}

}  // namespace probterm
