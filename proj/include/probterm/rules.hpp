#pragma once

#include "probterm/bounds.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace probterm {

enum class Goal { past, ast, non_ast, non_past };
enum class Rule { rsm, sm, repulsing_ast, repulsing_past };

std::string to_string(Goal g);
std::string to_string(Rule r);

struct Witness {
  Rule rule = Rule::rsm;
  Polynomial martingale_expression;
  ExpPolynomial bound_used;
  std::optional<ExpPolynomial> epsilon;
  std::optional<Rational> epsilon_value;
  std::optional<Polynomial> decrease_branch;
  std::optional<ExpPolynomial> branch_bound;
  std::optional<Rational> probability;
  std::optional<Rational> decrease;
  std::optional<ExpPolynomial> difference_bound;
  std::optional<Rational> difference_value;
};

struct Verdict {
  Goal goal = Goal::past;
  bool certified = false;
  std::optional<Witness> witness;
  std::set<Rule> ruled_out;
  std::vector<std::string> diagnostics;
};

struct AnalysisOptions {
  // When false, every eventual condition must hold from the first iteration.
  bool relaxed = true;
  std::size_t branch_cap = default_branch_cap;
  std::optional<Clock::time_point> deadline;
};

class TerminationAnalysis {
 public:
  explicit TerminationAnalysis(const ValidatedProgram& program, AnalysisOptions options = {});

  std::set<Rule> rule_out();
  Verdict check_past();
  Verdict check_ast();
  Verdict check_non_ast();
  Verdict check_non_past();
  std::vector<Verdict> analyze(const std::set<Goal>& goals);

  BoundEngine& bounds() { return bounds_; }
  MomentEngine& moments() { return moments_; }

 private:
  Verdict attempt(Goal goal);
  Verdict past();
  Verdict ast();
  Verdict non_ast();
  Verdict non_past();
  bool state_terms_nonpositive(const TimedPolynomial& t);
  bool nonpositive_from_start(const Polynomial& e);
  bool negative_from_start(const Polynomial& e);
  bool difference_bounded(const Polynomial& m, Witness& w, std::vector<std::string>& diagnostics);

  const ValidatedProgram& program_;
  AnalysisOptions options_;
  BranchCache branches_;
  MomentEngine moments_;
  SignAnalysis signs_;
  BoundEngine bounds_;
};

Verdict check_past(const ValidatedProgram& p, AnalysisOptions options = {});
Verdict check_ast(const ValidatedProgram& p, AnalysisOptions options = {});
Verdict check_non_ast(const ValidatedProgram& p, AnalysisOptions options = {});
Verdict check_non_past(const ValidatedProgram& p, AnalysisOptions options = {});
std::set<Rule> rule_out(const ValidatedProgram& p, AnalysisOptions options = {});
std::vector<Verdict> analyze(const ValidatedProgram& p, const std::set<Goal>& goals, AnalysisOptions options = {});

inline const std::set<Goal> all_goals{Goal::past, Goal::ast, Goal::non_ast, Goal::non_past};

}  // namespace probterm
