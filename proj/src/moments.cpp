#include "probterm/moments.hpp"

#include "probterm/recurrence.hpp"

namespace probterm {

const MomentClosedForm& MomentEngine::closed_form(const Monomial& m) {
  if (auto it = memo_.find(m); it != memo_.end()) return it->second;
  if (!in_progress_.insert(m).second) throw std::logic_error("cyclic monomial dependency");
  MomentClosedForm result{m, ExpPolynomial(1), true};
  if (!m.is_constant()) {
    const auto& dist = branches_.of(m);
    Rational r(0);
    ExpPolynomial h;
    result.deterministic = dist.size() == 1;
    for (const auto& b : dist) {
      for (const auto& [n, c] : b.expression.terms()) {
        if (n == m) {
          r += b.probability * c;
          continue;
        }
        const MomentClosedForm& sub = closed_form(n);
        h += sub.closed_form * ExpPolynomial(Rational(b.probability * c));
        result.deterministic &= sub.deterministic;
      }
    }
    result.closed_form = solve({r, h, SymCoeff(branches_.program().initial_value(m))});
  }
  in_progress_.erase(m);
  return memo_.emplace(m, std::move(result)).first->second;
}

ExpPolynomial MomentEngine::expected(const Polynomial& p) {
  ExpPolynomial sum;
  for (const auto& [m, c] : p.terms()) sum += closed_form(m).closed_form * ExpPolynomial(c);
  return sum;
}

ExpPolynomial MomentEngine::expected_guard_change() {
  ExpPolynomial e = expected(branches_.program().guard());
  return e.shifted() - e;
}

TimedPolynomial substitute_deterministic(MomentEngine& moments, const Polynomial& p) {
  TimedPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    if (m.is_constant() || moments.is_deterministic(m)) {
      out.add_term(Monomial(), moments.closed_form(m).closed_form * ExpPolynomial(c));
      continue;
    }
    std::vector<unsigned> det(m.width(), 0), rest(m.width(), 0);
    for (std::size_t j = 0; j < m.width(); ++j) {
      unsigned e = m.exponent(j);
      if (e > 0 && moments.is_deterministic(Monomial::variable(j)))
        det[j] = e;
      else
        rest[j] = e;
    }
    Monomial d(std::move(det));
    ExpPolynomial factor = d.is_constant() ? ExpPolynomial(1) : moments.closed_form(d).closed_form;
    out.add_term(Monomial(std::move(rest)), factor * ExpPolynomial(c));
  }
  return out;
}

MomentClosedForm expected_closed_form(const ValidatedProgram& p, const Monomial& m) {
  BranchCache branches(p);
  MomentEngine moments(branches);
  return moments.closed_form(m);
}

ExpPolynomial expected_guard_change(const ValidatedProgram& p) {
  BranchCache branches(p);
  MomentEngine moments(branches);
  return moments.expected_guard_change();
}

}  // namespace probterm
