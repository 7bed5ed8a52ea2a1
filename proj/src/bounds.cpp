#include "probterm/bounds.hpp"

#include "probterm/recurrence.hpp"

#include <numeric>
#include <optional>

namespace probterm {

const BoundingFunctions& BoundEngine::bounding_functions(const Monomial& m) {
  if (auto it = memo_.find(m); it != memo_.end()) return it->second;
  if (!in_progress_.insert(m).second)
    throw std::logic_error("monomial revisited while its bounds are being computed");
  branches_.check_deadline();
  BoundingFunctions b;
  unsigned g = 0;
  for (unsigned e : m.exponents()) g = std::gcd(g, e);
  if (m.is_constant() || moments_.is_deterministic(m)) {
    b.lower = b.upper = moments_.closed_form(m).closed_form;
    b.exact = true;
  } else if (g > 1 && g % 2 == 1) {
    std::vector<unsigned> root(m.exponents().begin(), m.exponents().end());
    for (auto& e : root) e /= g;
    BoundingFunctions base = bounding_functions(Monomial(std::move(root)));
    b.lower = base.lower.pow(g);
    b.upper = base.upper.pow(g);
    clip(m, b);
  } else {
    b = general(m);
    clip(m, b);
  }
  b.absolute = dominating({b.upper, -b.lower});
  in_progress_.erase(m);
  return memo_.emplace(m, std::move(b)).first->second;
}

BoundingFunctions BoundEngine::general(const Monomial& m) {
  std::vector<ExpPolynomial> inhom_upper, inhom_lower;
  std::optional<Rational> minrec, maxrec;
  for (const auto& branch : branches_.of(m)) {
    Rational r = branch.expression.coefficient(m);
    Polynomial inhom = branch.expression - Polynomial::term(m, r);
    if (!minrec || r < *minrec) minrec = r;
    if (!maxrec || r > *maxrec) maxrec = r;
    inhom_upper.push_back(bound_expression(inhom, Direction::upper));
    inhom_lower.push_back(bound_expression(inhom, Direction::lower));
  }
  if (sgn(*minrec) < 0) throw AnalysisFailure("negative recurrence coefficient");
  ExpPolynomial d(SymCoeff::symbol(Symbol::d));
  ExpPolynomial U = dominating(inhom_upper) * d;
  ExpPolynomial L = dominated(inhom_lower) * d;

  SignSet sign = signs_.oversign(m);
  std::vector<SymCoeff> initial;
  if (sign.positive) initial.push_back(SymCoeff::symbol(Symbol::c1));
  if (sign.negative) initial.push_back(SymCoeff::symbol(Symbol::c2, -1));
  std::vector<Rational> recs{*minrec};
  if (*maxrec != *minrec) recs.push_back(*maxrec);

  // A sign-definite monomial that starts at 0 can stay there, so the bound
  // towards 0 starts from 0 instead of a symbolic constant.
  bool starts_at_zero = is_zero(branches_.program().initial_value(m));
  auto start = [&](const SymCoeff& y0, Direction direction) {
    bool towards_zero = direction == Direction::lower ? y0.sign() == Sign::positive : y0.sign() == Sign::negative;
    return starts_at_zero && towards_zero && initial.size() == 1 ? SymCoeff(0) : y0;
  };

  BoundingFunctions b;
  for (const auto& r : recs) {
    for (const auto& y0 : initial) {
      b.upper_candidates.push_back(solve({r, U, start(y0, Direction::upper)}));
      b.lower_candidates.push_back(solve({r, L, start(y0, Direction::lower)}));
    }
  }
  b.upper = dominating(b.upper_candidates);
  b.lower = dominated(b.lower_candidates);
  return b;
}

void BoundEngine::clip(const Monomial& m, BoundingFunctions& b) {
  SignSet sign = signs_.oversign(m);
  if (!sign.negative && eventual_sign(b.lower) == Sign::negative) b.lower = ExpPolynomial();
  if (!sign.positive && eventual_sign(b.upper) == Sign::positive) b.upper = ExpPolynomial();
}

ExpPolynomial BoundEngine::bound_expression(const Polynomial& expr, Direction direction) {
  return bound_expression(expr.map_coefficients([](const Rational& c) { return ExpPolynomial(c); }), direction);
}

ExpPolynomial BoundEngine::bound_expression(const TimedPolynomial& expr, Direction direction) {
  ExpPolynomial exact;
  std::vector<AsymptoticClass> approximate;
  for (const auto& [n, c] : expr.terms()) {
    if (n.is_constant() || moments_.is_deterministic(n)) {
      exact += c * moments_.closed_form(n).closed_form;
      continue;
    }
    std::vector<unsigned> det(n.width(), 0), rest(n.width(), 0);
    for (std::size_t j = 0; j < n.width(); ++j) {
      unsigned e = n.exponent(j);
      if (e > 0 && moments_.is_deterministic(Monomial::variable(j)))
        det[j] = e;
      else
        rest[j] = e;
    }
    Monomial dm(std::move(det));
    ExpPolynomial coefficient = dm.is_constant() ? c : c * moments_.closed_form(dm).closed_form;
    Sign s = eventual_sign(coefficient);
    if (s == Sign::zero) continue;
    if (s == Sign::ambiguous) throw AmbiguousSign("coefficient " + to_string(coefficient) + " has no definite sign");
    const BoundingFunctions& bf = bounding_functions(Monomial(std::move(rest)));
    bool use_upper = (direction == Direction::upper) == (s == Sign::positive);
    ExpPolynomial term = coefficient * (use_upper ? bf.upper : bf.lower);
    if (term.is_eventually_zero()) continue;
    AsymptoticClass cls = leading_class(term);
    if (cls.sign == Sign::ambiguous) throw AmbiguousSign("bound " + to_string(term) + " has no definite sign");
    approximate.push_back(cls);
  }
  if (!exact.is_eventually_zero()) {
    AsymptoticClass cls = leading_class(exact, direction == Direction::upper ? Sign::positive : Sign::negative);
    approximate.push_back(cls);
  }
  if (approximate.empty()) return {};
  AsymptoticClass top = approximate.front();
  for (const auto& cls : approximate)
    if (compare_magnitude(cls, top) > 0) top = cls;
  bool all_negative = true, all_positive = true;
  for (const auto& cls : approximate) {
    if (compare_magnitude(cls, top) != 0) continue;
    all_negative &= cls.sign == Sign::negative;
    all_positive &= cls.sign == Sign::positive;
  }
  if (direction == Direction::upper)
    top.sign = all_negative ? Sign::negative : Sign::positive;
  else
    top.sign = all_positive ? Sign::positive : Sign::negative;
  return top.realize();
}

ExpPolynomial BoundEngine::absolute_bound(const TimedPolynomial& expr) {
  return dominating({bound_expression(expr, Direction::upper), -bound_expression(expr, Direction::lower)});
}

ExpPolynomial BoundEngine::absolute_bound(const Polynomial& expr) {
  return dominating({bound_expression(expr, Direction::upper), -bound_expression(expr, Direction::lower)});
}

BoundingFunctions bounding_functions(const ValidatedProgram& p, const Monomial& m) {
  BranchCache branches(p);
  MomentEngine moments(branches);
  SignAnalysis signs(branches);
  BoundEngine bounds(branches, moments, signs);
  return bounds.bounding_functions(m);
}

ExpPolynomial bound_expression(const ValidatedProgram& p, const TimedPolynomial& expr, Direction direction) {
  BranchCache branches(p);
  MomentEngine moments(branches);
  SignAnalysis signs(branches);
  BoundEngine bounds(branches, moments, signs);
  return bounds.bound_expression(expr, direction);
}

ExpPolynomial absolute_bound(const ValidatedProgram& p, const TimedPolynomial& expr) {
  BranchCache branches(p);
  MomentEngine moments(branches);
  SignAnalysis signs(branches);
  BoundEngine bounds(branches, moments, signs);
  return bounds.absolute_bound(expr);
}

}  // namespace probterm
