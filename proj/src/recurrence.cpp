#include "probterm/recurrence.hpp"

#include <stdexcept>

namespace probterm {

namespace {

// Particular solution of y(i+1) - r*y(i) = q(i) * b^i by undetermined coefficients.
ExpPolynomial particular(const Rational& r, const Rational& b, const ExpPolynomial::Coefficients& q) {
  const unsigned n = q.size();
  std::vector<SymCoeff> p;
  if (b != r) {
    p.resize(n);
    for (unsigned k = n; k-- > 0;) {
      SymCoeff acc = q[k];
      for (unsigned j = k + 1; j < n; ++j) acc -= p[j] * Rational(b * binomial(j, k));
      p[k] = acc * Rational(1 / (b - r));
    }
  } else {
    p.resize(n + 1);
    for (unsigned k = n; k-- > 0;) {
      SymCoeff acc = q[k] * Rational(1 / b);
      for (unsigned j = k + 2; j <= n; ++j) acc -= p[j] * binomial(j, k);
      p[k + 1] = acc * Rational(1, k + 1);
    }
  }
  ExpPolynomial result;
  for (unsigned j = 0; j < p.size(); ++j) result += ExpPolynomial::term(p[j], j, b);
  return result;
}

}  // namespace

ExpPolynomial solve(const FirstOrderRecurrence& rec) {
  const Rational& r = rec.coefficient;
  if (sgn(r) < 0) throw std::domain_error("negative recurrence coefficient");
  const ExpPolynomial& h = rec.inhomogeneous;

  ExpPolynomial s;
  for (const auto& [b, q] : h.terms()) s += particular(r, b, q);

  // The remainder d(i) = y(i) - s(i) obeys d(i+1) = r*d(i) + corrections of h.
  int last = h.corrections().empty() ? -1 : static_cast<int>(h.corrections().rbegin()->first);
  std::vector<SymCoeff> d{rec.initial - s.value_at(0)};
  for (int t = 0; t <= last; ++t) {
    SymCoeff next = d.back() * r;
    if (auto it = h.corrections().find(t); it != h.corrections().end()) next += it->second;
    d.push_back(next);
  }
  std::vector<SymCoeff> prefix;
  for (unsigned t = 0; t < d.size(); ++t) prefix.push_back(s.value_at(t) + d[t]);
  if (sgn(r) > 0) {
    unsigned n = d.size() - 1;
    s += ExpPolynomial::term(d.back() * Rational(1 / power(r, n)), 0, r);
    prefix.pop_back();
  }
  for (unsigned t = 0; t < prefix.size(); ++t) s.set_value_at(t, prefix[t]);

  ExpPolynomial residual = s.shifted() - s * ExpPolynomial(r) - h;
  if (!residual.is_zero() || s.value_at(0) != rec.initial)
    throw std::logic_error("recurrence closed form failed verification");
  return s;
}

}  // namespace probterm
