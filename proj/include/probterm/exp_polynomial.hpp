#pragma once

#include "probterm/rational.hpp"

#include <array>
#include <compare>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace probterm {

enum class Sign { negative, zero, positive, ambiguous };

std::string to_string(Sign s);

enum class Symbol { c1 = 1, c2 = 2, d = 3 };

struct SymbolValues {
  Rational c1 = 1, c2 = 1, d = 1;
};

// k0 + k1*c1 + k2*c2 + k3*d where c1, c2, d are unknown positive constants.
class SymCoeff {
 public:
  SymCoeff() = default;
  SymCoeff(const Rational& constant) { k_[0] = constant; }
  SymCoeff(long constant) { k_[0] = constant; }
  static SymCoeff symbol(Symbol s, const Rational& factor = 1);

  const Rational& constant() const { return k_[0]; }
  const Rational& factor(Symbol s) const { return k_[static_cast<int>(s)]; }
  bool is_zero() const;
  bool is_symbolic() const;
  Sign sign() const;
  Rational evaluate(const SymbolValues& values = {}) const;

  SymCoeff operator-() const;
  SymCoeff& operator+=(const SymCoeff& o);
  SymCoeff& operator-=(const SymCoeff& o);
  SymCoeff& operator*=(const Rational& r);
  friend SymCoeff operator+(SymCoeff a, const SymCoeff& b) { return a += b; }
  friend SymCoeff operator-(SymCoeff a, const SymCoeff& b) { return a -= b; }
  friend SymCoeff operator*(SymCoeff a, const Rational& r) { return a *= r; }
  friend SymCoeff operator*(const Rational& r, SymCoeff a) { return a *= r; }
  // Throws std::domain_error when both operands carry symbolic parts.
  friend SymCoeff operator*(const SymCoeff& a, const SymCoeff& b);
  friend bool operator==(const SymCoeff&, const SymCoeff&) = default;

 private:
  std::array<Rational, 4> k_;
};

std::string to_string(const SymCoeff& c);

// Sum over bases b > 0 of p_b(i) * b^i, plus finitely many pointwise
// corrections: corrections()[k] is the value at i = k minus the value of the
// terms there. Base-0 contributions only ever show up as corrections.
class ExpPolynomial {
 public:
  using Coefficients = std::vector<SymCoeff>;

  ExpPolynomial() = default;
  ExpPolynomial(const SymCoeff& constant);
  ExpPolynomial(const Rational& constant) : ExpPolynomial(SymCoeff(constant)) {}
  ExpPolynomial(long constant) : ExpPolynomial(SymCoeff(constant)) {}

  // coefficient * i^degree * base^i
  static ExpPolynomial term(const SymCoeff& coefficient, unsigned degree, const Rational& base);
  static ExpPolynomial iteration() { return term(SymCoeff(1), 1, Rational(1)); }
  static ExpPolynomial exponential(const Rational& base) { return term(SymCoeff(1), 0, base); }

  const std::map<Rational, Coefficients>& terms() const { return terms_; }
  const std::map<unsigned, SymCoeff>& corrections() const { return corrections_; }
  bool is_zero() const { return terms_.empty() && corrections_.empty(); }
  bool is_eventually_zero() const { return terms_.empty(); }
  bool is_symbolic() const;
  bool is_constant() const;

  SymCoeff value_at(unsigned i) const;
  SymCoeff terms_value_at(unsigned i) const;
  Rational evaluate(unsigned i, const SymbolValues& values = {}) const;
  void set_value_at(unsigned i, const SymCoeff& value);

  ExpPolynomial shifted(unsigned by = 1) const;
  ExpPolynomial pow(unsigned exponent) const;
  ExpPolynomial substitute_symbols(const SymbolValues& values) const;

  ExpPolynomial operator-() const;
  ExpPolynomial& operator+=(const ExpPolynomial& o);
  ExpPolynomial& operator-=(const ExpPolynomial& o);
  ExpPolynomial& operator*=(const ExpPolynomial& o);
  friend ExpPolynomial operator+(ExpPolynomial a, const ExpPolynomial& b) { return a += b; }
  friend ExpPolynomial operator-(ExpPolynomial a, const ExpPolynomial& b) { return a -= b; }
  friend ExpPolynomial operator*(ExpPolynomial a, const ExpPolynomial& b) { return a *= b; }
  friend bool operator==(const ExpPolynomial&, const ExpPolynomial&) = default;

 private:
  void add_term(const Rational& base, unsigned degree, const SymCoeff& c);
  void normalize();

  std::map<Rational, Coefficients> terms_;
  std::map<unsigned, SymCoeff> corrections_;
};

inline bool coefficient_is_zero(const ExpPolynomial& f) { return f.is_zero(); }

std::string to_string(const ExpPolynomial& f);

class SymbolicAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Realized as sign * i^degree * base^i.
struct AsymptoticClass {
  Sign sign = Sign::zero;
  Rational base = 1;
  unsigned degree = 0;

  ExpPolynomial realize() const;
  friend bool operator==(const AsymptoticClass&, const AsymptoticClass&) = default;
};

std::strong_ordering compare(const AsymptoticClass& a, const AsymptoticClass& b);
// Growth of |f| only: (base, degree) lexicographic.
std::strong_ordering compare_magnitude(const AsymptoticClass& a, const AsymptoticClass& b);
std::string to_string(const AsymptoticClass& c);

// Class of the leading term; a mixed symbolic leading coefficient takes the
// sign given by `mixed_as`, or Sign::ambiguous when that is left as is.
AsymptoticClass leading_class(const ExpPolynomial& f, Sign mixed_as = Sign::ambiguous);

Sign eventual_sign(const ExpPolynomial& f);

struct ExtendedRational {
  enum class Kind { negative_infinity, finite, positive_infinity };
  Kind kind = Kind::finite;
  Rational value = 0;

  bool is_negative() const {
    return kind == Kind::negative_infinity || (kind == Kind::finite && sgn(value) < 0);
  }
  friend bool operator==(const ExtendedRational&, const ExtendedRational&) = default;
};

std::string to_string(const ExtendedRational& e);

ExtendedRational limit_at_infinity(const ExpPolynomial& f);

ExpPolynomial dominating(std::span<const ExpPolynomial> fs);
ExpPolynomial dominated(std::span<const ExpPolynomial> fs);
ExpPolynomial dominating(std::initializer_list<ExpPolynomial> fs);
ExpPolynomial dominated(std::initializer_list<ExpPolynomial> fs);

bool is_O1(const ExpPolynomial& f);
bool is_Omega1(const ExpPolynomial& f);

// Sound checks over every i >= 0; a false answer means "not proven".
// Symbolic inputs are never proven.
bool nonnegative_for_all(const ExpPolynomial& f);
bool positive_for_all(const ExpPolynomial& f);
// Some e > 0 with f(i) <= -e for all i.
bool bounded_below_zero_for_all(const ExpPolynomial& f);

}  // namespace probterm
