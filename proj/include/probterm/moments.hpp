#pragma once

#include "probterm/exp_polynomial.hpp"
#include "probterm/semantics.hpp"

#include <map>
#include <set>

namespace probterm {

struct MomentClosedForm {
  Monomial monomial;
  ExpPolynomial closed_form;
  bool deterministic = false;
};

// First-order moments of monomials under the guard-free update dynamics.
class MomentEngine {
 public:
  explicit MomentEngine(BranchCache& branches) : branches_(branches) {}

  const MomentClosedForm& closed_form(const Monomial& m);
  bool is_deterministic(const Monomial& m) { return closed_form(m).deterministic; }
  ExpPolynomial expected(const Polynomial& p);
  ExpPolynomial expected_guard_change();

 private:
  BranchCache& branches_;
  std::map<Monomial, MomentClosedForm, MonomialLess> memo_;
  std::set<Monomial, MonomialLess> in_progress_;
};

// Polynomial over program variables whose coefficients are functions of i.
using TimedPolynomial = MultiPoly<ExpPolynomial>;

// Replaces deterministic monomials, and the deterministic factor of every
// other monomial, by their exact closed forms.
TimedPolynomial substitute_deterministic(MomentEngine& moments, const Polynomial& p);

MomentClosedForm expected_closed_form(const ValidatedProgram& p, const Monomial& m);
ExpPolynomial expected_guard_change(const ValidatedProgram& p);

}  // namespace probterm
