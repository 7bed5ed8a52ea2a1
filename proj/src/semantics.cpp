#include "probterm/semantics.hpp"

#include "probterm/moments.hpp"

namespace probterm {

namespace {

struct PolynomialLess {
  bool operator()(const Polynomial& a, const Polynomial& b) const {
    if (a.terms().size() != b.terms().size()) return a.terms().size() < b.terms().size();
    for (auto ia = a.terms().begin(), ib = b.terms().begin(); ia != a.terms().end(); ++ia, ++ib) {
      if (auto c = compare(ia->first, ib->first); c != 0) return c < 0;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return false;
  }
};

class Merger {
 public:
  void add(Polynomial e, const Rational& p) {
    auto [it, inserted] = index_.try_emplace(e, branches_.size());
    if (inserted)
      branches_.push_back({std::move(e), p});
    else
      branches_[it->second].probability += p;
  }
  std::size_t size() const { return branches_.size(); }
  OneStepDistribution take() { return std::move(branches_); }

 private:
  std::map<Polynomial, std::size_t, PolynomialLess> index_;
  OneStepDistribution branches_;
};

}  // namespace

OneStepDistribution one_step_distribution(const ValidatedProgram& p, const Polynomial& expr, std::size_t cap) {
  OneStepDistribution current{{expr, Rational(1)}};
  for (std::size_t j = p.updates().size(); j-- > 0;) {
    const LinearUpdate& update = p.updates()[j];
    std::vector<Polynomial> replacements;
    for (const auto& c : update.choices)
      replacements.push_back(Polynomial::term(Monomial::variable(j), c.self_coefficient) + c.rest);
    Merger next;
    for (auto& b : current) {
      if (!b.expression.mentions(j)) {
        next.add(std::move(b.expression), b.probability);
        continue;
      }
      for (std::size_t k = 0; k < update.choices.size(); ++k) {
        next.add(substitute(b.expression, j, replacements[k]), b.probability * update.choices[k].probability);
        if (next.size() > cap) throw BranchExplosion("more than " + std::to_string(cap) + " branches");
      }
    }
    current = next.take();
  }
  return current;
}

Polynomial expected_value(const OneStepDistribution& d) {
  Polynomial sum;
  for (const auto& b : d) sum += b.expression * Polynomial(b.probability);
  return sum;
}

Polynomial martingale_expression(const ValidatedProgram& p, const Polynomial& expr, std::size_t cap) {
  return expected_value(one_step_distribution(p, expr, cap)) - expr;
}

std::string to_string(const SignSet& s) {
  if (s.positive && s.negative) return "{+,-}";
  if (s.positive) return "{+}";
  if (s.negative) return "{-}";
  return "{}";
}

BranchCache::BranchCache(const ValidatedProgram& program, std::size_t cap, std::optional<Clock::time_point> deadline)
    : program_(program), cap_(cap), deadline_(deadline) {}

void BranchCache::check_deadline() const {
  if (deadline_ && Clock::now() > *deadline_) throw AnalysisTimeout("analysis deadline exceeded");
}

const OneStepDistribution& BranchCache::of(const Monomial& m) {
  if (auto it = memo_.find(m); it != memo_.end()) return it->second;
  check_deadline();
  auto d = one_step_distribution(program_, Polynomial::term(m, Rational(1)), cap_);
  return memo_.emplace(m, std::move(d)).first->second;
}

OneStepDistribution BranchCache::of(const Polynomial& p) {
  check_deadline();
  return one_step_distribution(program_, p, cap_);
}

namespace {

SignSet multiply(const SignSet& a, const SignSet& b) {
  return {(a.positive && b.positive) || (a.negative && b.negative),
          (a.positive && b.negative) || (a.negative && b.positive)};
}

}  // namespace

SignSet SignAnalysis::by_branches(const Monomial& m) {
  const Rational initial = branches_.program().initial_value(m);
  bool nonnegative = sgn(initial) >= 0, nonpositive = sgn(initial) <= 0;
  for (const auto& b : branches_.of(m)) {
    for (const auto& [n, c] : b.expression.terms()) {
      if (!nonnegative && !nonpositive) break;
      if (n == m) {
        if (sgn(c) < 0) nonnegative = nonpositive = false;
        continue;
      }
      if (n.is_constant()) {
        nonnegative &= sgn(c) >= 0;
        nonpositive &= sgn(c) <= 0;
        continue;
      }
      SignSet s = oversign(n);
      bool term_nonnegative = sgn(c) > 0 ? !s.negative : !s.positive;
      bool term_nonpositive = sgn(c) > 0 ? !s.positive : !s.negative;
      nonnegative &= term_nonnegative;
      nonpositive &= term_nonpositive;
    }
  }
  return {!nonpositive, !nonnegative};
}

SignSet SignAnalysis::oversign(const Monomial& m) {
  if (m.is_constant() || m.has_only_even_exponents()) return {true, false};
  if (auto it = memo_.find(m); it != memo_.end()) return it->second;
  if (!in_progress_.insert(m).second) return {};
  SignSet result = by_branches(m);
  std::size_t factors = 0;
  for (auto e : m.exponents()) factors += e > 0;
  if (factors > 1) {
    SignSet product{true, false};
    for (std::size_t j = 0; j < m.width(); ++j) {
      unsigned e = m.exponent(j);
      if (e == 0) continue;
      product = multiply(product, e % 2 == 0 ? SignSet{true, false} : oversign(Monomial::variable(j)));
    }
    result.positive &= product.positive;
    result.negative &= product.negative;
  }
  in_progress_.erase(m);
  memo_[m] = result;
  return result;
}

bool can_reach_any_iteration(BranchCache& branches, MomentEngine& moments, SignAnalysis& signs) {
  const ValidatedProgram& p = branches.program();
  const Polynomial& g = p.guard();
  if (sgn(p.initial_value(g)) <= 0) return false;
  for (const auto& b : branches.of(g)) {
    TimedPolynomial diff = substitute_deterministic(moments, b.expression - g);
    bool ok = true;
    for (const auto& [n, c] : diff.terms()) {
      if (!nonnegative_for_all(c) || (!n.is_constant() && signs.oversign(n).negative)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

SignSet oversign(const ValidatedProgram& p, const Monomial& m) {
  BranchCache branches(p);
  SignAnalysis signs(branches);
  return signs.oversign(m);
}

bool can_reach_any_iteration(const ValidatedProgram& p) {
  BranchCache branches(p);
  MomentEngine moments(branches);
  SignAnalysis signs(branches);
  return can_reach_any_iteration(branches, moments, signs);
}

}  // namespace probterm
