#include "probterm/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace probterm {

Monomial::Monomial(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) { trim(); }

Monomial Monomial::variable(std::size_t index, unsigned exponent) {
  std::vector<unsigned> e(index + 1, 0);
  e[index] = exponent;
  return Monomial(std::move(e));
}

void Monomial::trim() {
  while (!exponents_.empty() && exponents_.back() == 0) exponents_.pop_back();
}

unsigned Monomial::degree() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0u);
}

bool Monomial::has_only_even_exponents() const {
  return std::all_of(exponents_.begin(), exponents_.end(), [](unsigned e) { return e % 2 == 0; });
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::vector<unsigned> e(std::max(width(), other.width()), 0);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = exponent(k) + other.exponent(k);
  return Monomial(std::move(e));
}

Monomial Monomial::without(std::size_t index) const {
  if (index >= width()) return *this;
  std::vector<unsigned> e = exponents_;
  e[index] = 0;
  return Monomial(std::move(e));
}

std::strong_ordering compare(const Monomial& a, const Monomial& b) {
  for (std::size_t k = std::max(a.width(), b.width()); k-- > 0;) {
    if (auto c = a.exponent(k) <=> b.exponent(k); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string to_string(const Monomial& m, std::span<const std::string> names) {
  std::string out;
  for (std::size_t k = 0; k < m.width(); ++k) {
    if (m.exponent(k) == 0) continue;
    if (!out.empty()) out += '*';
    out += k < names.size() ? names[k] : "v" + std::to_string(k);
    if (m.exponent(k) > 1) out += '^' + std::to_string(m.exponent(k));
  }
  return out;
}

Polynomial substitute(const Polynomial& p, std::size_t index, const Polynomial& replacement) {
  if (!p.mentions(index)) return p;
  std::vector<Polynomial> powers{Polynomial(Rational(1))};
  Polynomial result;
  for (const auto& [m, c] : p.terms()) {
    unsigned e = m.exponent(index);
    while (powers.size() <= e) powers.push_back(powers.back() * replacement);
    result += Polynomial::term(m.without(index), c) * powers[e];
  }
  return result;
}

Rational evaluate(const Monomial& m, std::span<const Rational> values) {
  Rational v(1);
  for (std::size_t k = 0; k < m.width(); ++k)
    if (m.exponent(k) > 0) v *= power(values[k], m.exponent(k));
  return v;
}

Rational evaluate(const Polynomial& p, std::span<const Rational> values) {
  Rational sum(0);
  for (const auto& [m, c] : p.terms()) sum += c * evaluate(m, values);
  return sum;
}

std::string to_string(const Polynomial& p, std::span<const std::string> names) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    Rational magnitude = abs(c);
    if (out.empty())
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? " - " : " + ";
    if (m.is_constant()) {
      out += to_string(magnitude);
    } else {
      if (magnitude != 1) out += to_string(magnitude) + "*";
      out += to_string(m, names);
    }
  }
  return out;
}

}  // namespace probterm
