#pragma once

#include "probterm/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace probterm {

// Exponent vector over program variables; trailing zeros are never stored.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<unsigned> exponents);

  static Monomial variable(std::size_t index, unsigned exponent = 1);

  unsigned exponent(std::size_t index) const {
    return index < exponents_.size() ? exponents_[index] : 0;
  }
  std::span<const unsigned> exponents() const { return exponents_; }
  std::size_t width() const { return exponents_.size(); }
  bool is_constant() const { return exponents_.empty(); }
  unsigned degree() const;
  bool has_only_even_exponents() const;

  Monomial operator*(const Monomial& other) const;
  Monomial without(std::size_t index) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  void trim();
  std::vector<unsigned> exponents_;
};

// The total order used to sequence monomials: exponents are compared starting
// from the last variable.
std::strong_ordering compare(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

std::string to_string(const Monomial& m, std::span<const std::string> names);

template <typename Coeff>
class MultiPoly {
 public:
  using Terms = std::map<Monomial, Coeff, MonomialLess>;

  MultiPoly() = default;
  MultiPoly(const Coeff& constant) { add_term(Monomial(), constant); }

  static MultiPoly variable(std::size_t index) {
    return term(Monomial::variable(index), Coeff(1));
  }
  static MultiPoly term(const Monomial& m, const Coeff& c) {
    MultiPoly p;
    p.add_term(m, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
  }
  Coeff coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff() : it->second;
  }
  Coeff constant_term() const { return coefficient(Monomial()); }

  bool mentions(std::size_t index) const {
    for (const auto& [m, c] : terms_)
      if (m.exponent(index) > 0) return true;
    return false;
  }
  std::size_t width() const {
    std::size_t w = 0;
    for (const auto& [m, c] : terms_) w = std::max(w, m.width());
    return w;
  }
  unsigned degree_in(std::size_t index) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(index));
    return d;
  }

  void add_term(const Monomial& m, const Coeff& c) {
    if (coefficient_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (coefficient_is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiPoly operator-() const {
    MultiPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, Coeff(-c));
    return r;
  }
  MultiPoly& operator+=(const MultiPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, Coeff(-c));
    return *this;
  }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, Coeff(ca * cb));
    return r;
  }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

  MultiPoly pow(int exponent) const {
    if (exponent < 0) throw std::domain_error("polynomial power by negative exponent");
    MultiPoly result(Coeff(1)), base = *this;
    for (unsigned e = static_cast<unsigned>(exponent); e; e >>= 1) {
      if (e & 1) result *= base;
      if (e > 1) base *= base;
    }
    return result;
  }

  template <typename F>
  auto map_coefficients(F f) const {
    using Out = decltype(f(std::declval<const Coeff&>()));
    MultiPoly<Out> r;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

 private:
  Terms terms_;
};

using Polynomial = MultiPoly<Rational>;

Polynomial substitute(const Polynomial& p, std::size_t index, const Polynomial& replacement);
Rational evaluate(const Polynomial& p, std::span<const Rational> values);
Rational evaluate(const Monomial& m, std::span<const Rational> values);
std::string to_string(const Polynomial& p, std::span<const std::string> names);

}  // namespace probterm
