#pragma once

#include "probterm/moments.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace probterm {

struct BoundingFunctions {
  ExpPolynomial lower;
  ExpPolynomial upper;
  ExpPolynomial absolute;
  bool exact = false;
  // Closed forms of the candidate recurrences, kept when the general
  // procedure ran.
  std::vector<ExpPolynomial> upper_candidates;
  std::vector<ExpPolynomial> lower_candidates;
};

enum class Direction { lower, upper };

class AmbiguousSign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AnalysisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundEngine {
 public:
  BoundEngine(BranchCache& branches, MomentEngine& moments, SignAnalysis& signs)
      : branches_(branches), moments_(moments), signs_(signs) {}

  const BoundingFunctions& bounding_functions(const Monomial& m);
  ExpPolynomial bound_expression(const TimedPolynomial& expr, Direction direction);
  ExpPolynomial bound_expression(const Polynomial& expr, Direction direction);
  ExpPolynomial absolute_bound(const TimedPolynomial& expr);
  ExpPolynomial absolute_bound(const Polynomial& expr);

  MomentEngine& moments() { return moments_; }
  SignAnalysis& signs() { return signs_; }

 private:
  BoundingFunctions general(const Monomial& m);
  void clip(const Monomial& m, BoundingFunctions& b);

  BranchCache& branches_;
  MomentEngine& moments_;
  SignAnalysis& signs_;
  std::map<Monomial, BoundingFunctions, MonomialLess> memo_;
  std::set<Monomial, MonomialLess> in_progress_;
};

BoundingFunctions bounding_functions(const ValidatedProgram& p, const Monomial& m);
ExpPolynomial bound_expression(const ValidatedProgram& p, const TimedPolynomial& expr, Direction direction);
ExpPolynomial absolute_bound(const ValidatedProgram& p, const TimedPolynomial& expr);

}  // namespace probterm
