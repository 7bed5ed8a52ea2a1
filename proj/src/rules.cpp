#include "probterm/rules.hpp"

#include <map>

namespace probterm {

std::string to_string(Goal g) {
  switch (g) {
    case Goal::past: return "PAST";
    case Goal::ast: return "AST";
    case Goal::non_ast: return "NonAST";
    case Goal::non_past: return "NonPAST";
  }
  return "?";
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::rsm: return "RSM";
    case Rule::sm: return "SM";
    case Rule::repulsing_ast: return "R-AST";
    case Rule::repulsing_past: return "R-PAST";
  }
  return "?";
}

namespace {

Rule rule_for(Goal g) {
  switch (g) {
    case Goal::past: return Rule::rsm;
    case Goal::ast: return Rule::sm;
    case Goal::non_ast: return Rule::repulsing_ast;
    case Goal::non_past: return Rule::repulsing_past;
  }
  return Rule::rsm;
}

// The exact value of a substituted expression when it does not depend on the
// state or on i.
std::optional<Rational> constant_value(const TimedPolynomial& t) {
  if (t.is_zero()) return Rational(0);
  if (!t.is_constant()) return std::nullopt;
  const ExpPolynomial& c = t.constant_term();
  if (!c.is_constant() || c.is_symbolic()) return std::nullopt;
  return c.value_at(0).constant();
}

}  // namespace

TerminationAnalysis::TerminationAnalysis(const ValidatedProgram& program, AnalysisOptions options)
    : program_(program),
      options_(options),
      branches_(program, options.branch_cap, options.deadline),
      moments_(branches_),
      signs_(branches_),
      bounds_(branches_, moments_, signs_) {}

std::set<Rule> TerminationAnalysis::rule_out() {
  switch (eventual_sign(moments_.expected_guard_change())) {
    case Sign::positive: return {Rule::rsm, Rule::sm};
    case Sign::zero: return {Rule::rsm, Rule::repulsing_ast};
    case Sign::negative: return {Rule::repulsing_ast};
    case Sign::ambiguous: break;
  }
  return {};
}

bool TerminationAnalysis::state_terms_nonpositive(const TimedPolynomial& t) {
  for (const auto& [n, c] : t.terms()) {
    if (n.is_constant()) continue;
    SignSet s = signs_.oversign(n);
    bool ok = (nonnegative_for_all(-c) && !s.negative) || (nonnegative_for_all(c) && !s.positive);
    if (!ok) return false;
  }
  return true;
}

bool TerminationAnalysis::nonpositive_from_start(const Polynomial& e) {
  TimedPolynomial t = substitute_deterministic(moments_, e);
  return nonnegative_for_all(-t.constant_term()) && state_terms_nonpositive(t);
}

bool TerminationAnalysis::negative_from_start(const Polynomial& e) {
  TimedPolynomial t = substitute_deterministic(moments_, e);
  return bounded_below_zero_for_all(t.constant_term()) && state_terms_nonpositive(t);
}

Verdict TerminationAnalysis::past() {
  Verdict v;
  v.goal = Goal::past;
  const Polynomial& g = program_.guard();
  Witness w;
  w.rule = Rule::rsm;
  w.martingale_expression = expected_value(branches_.of(g)) - g;
  TimedPolynomial timed = substitute_deterministic(moments_, w.martingale_expression);
  if (options_.relaxed) {
    w.bound_used = bounds_.bound_expression(timed, Direction::upper);
    ExtendedRational lim = limit_at_infinity(w.bound_used);
    if (!lim.is_negative()) {
      v.diagnostics.push_back("upper bound " + to_string(w.bound_used) + " of the martingale expression has limit " +
                              to_string(lim) + ", not below 0");
      return v;
    }
  } else {
    if (!negative_from_start(w.martingale_expression)) {
      v.diagnostics.push_back("martingale expression is not below a negative constant from the first iteration");
      return v;
    }
    w.bound_used = bounds_.bound_expression(timed, Direction::upper);
  }
  w.epsilon = -w.bound_used;
  if (auto value = constant_value(timed)) w.epsilon_value = -*value;
  v.certified = true;
  v.witness = w;
  return v;
}

Verdict TerminationAnalysis::ast() {
  Verdict v;
  v.goal = Goal::ast;
  const Polynomial& g = program_.guard();
  Witness w;
  w.rule = Rule::sm;
  const auto& dist = branches_.of(g);
  w.martingale_expression = expected_value(dist) - g;
  TimedPolynomial timed = substitute_deterministic(moments_, w.martingale_expression);
  w.bound_used = bounds_.bound_expression(timed, Direction::upper);
  if (options_.relaxed) {
    Sign s = eventual_sign(w.bound_used);
    if (s != Sign::negative && s != Sign::zero) {
      v.diagnostics.push_back("upper bound " + to_string(w.bound_used) + " of the martingale expression is not eventually <= 0");
      return v;
    }
  } else if (!nonpositive_from_start(w.martingale_expression)) {
    v.diagnostics.push_back("martingale expression is not <= 0 from the first iteration");
    return v;
  }
  for (const auto& b : dist) {
    Polynomial diff = b.expression - g;
    TimedPolynomial timed_diff = substitute_deterministic(moments_, diff);
    ExpPolynomial d = bounds_.bound_expression(timed_diff, Direction::upper);
    bool decreasing = options_.relaxed ? limit_at_infinity(d).is_negative() : negative_from_start(diff);
    if (!decreasing) continue;
    w.decrease_branch = b.expression;
    w.probability = b.probability;
    auto value = constant_value(timed_diff);
    w.decrease = value ? Rational(-*value) : Rational(1);
    w.branch_bound = d;
    w.epsilon = -d;
    v.certified = true;
    v.witness = w;
    return v;
  }
  v.diagnostics.push_back("no branch of the guard decreases it by a constant");
  return v;
}

bool TerminationAnalysis::difference_bounded(const Polynomial& m, Witness& w, std::vector<std::string>& diagnostics) {
  std::vector<ExpPolynomial> bounds;
  std::optional<Rational> largest = Rational(0);
  for (const auto& b : branches_.of(-m)) {
    TimedPolynomial diff = substitute_deterministic(moments_, -b.expression - m);
    bounds.push_back(bounds_.absolute_bound(diff));
    auto value = constant_value(diff);
    if (value && largest)
      largest = std::max(*largest, Rational(abs(*value)));
    else
      largest.reset();
  }
  w.difference_bound = dominating(bounds);
  if (largest) w.difference_value = *largest;
  if (!is_O1(*w.difference_bound)) {
    diagnostics.push_back("differences are not bounded: absolute bound " + to_string(*w.difference_bound));
    return false;
  }
  return true;
}

Verdict TerminationAnalysis::non_ast() {
  Verdict v;
  v.goal = Goal::non_ast;
  Polynomial m = -program_.guard();
  Witness w;
  w.rule = Rule::repulsing_ast;
  w.martingale_expression = expected_value(branches_.of(m)) - m;
  TimedPolynomial timed = substitute_deterministic(moments_, w.martingale_expression);
  w.bound_used = bounds_.bound_expression(timed, Direction::upper);
  if (options_.relaxed) {
    Sign s = eventual_sign(w.bound_used);
    if (s != Sign::negative && s != Sign::zero) {
      v.diagnostics.push_back("upper bound " + to_string(w.bound_used) + " of the martingale expression is not eventually <= 0");
      return v;
    }
    if (!is_Omega1(-w.bound_used)) {
      v.diagnostics.push_back("epsilon " + to_string(-w.bound_used) + " is not bounded away from 0");
      return v;
    }
  } else if (!negative_from_start(w.martingale_expression)) {
    v.diagnostics.push_back("martingale expression is not below a negative constant from the first iteration");
    return v;
  }
  w.epsilon = -w.bound_used;
  if (auto value = constant_value(timed)) w.epsilon_value = -*value;
  if (!can_reach_any_iteration(branches_, moments_, signs_)) {
    v.diagnostics.push_back("could not show that every iteration is reached with positive probability");
    return v;
  }
  if (!difference_bounded(m, w, v.diagnostics)) return v;
  v.certified = true;
  v.witness = w;
  return v;
}

Verdict TerminationAnalysis::non_past() {
  Verdict v;
  v.goal = Goal::non_past;
  Polynomial m = -program_.guard();
  Witness w;
  w.rule = Rule::repulsing_past;
  w.martingale_expression = expected_value(branches_.of(m)) - m;
  if (!w.martingale_expression.is_zero()) {
    v.diagnostics.push_back("martingale expression " + program_.render(w.martingale_expression) + " is not identically 0");
    return v;
  }
  w.epsilon = ExpPolynomial();
  w.epsilon_value = Rational(0);
  if (!can_reach_any_iteration(branches_, moments_, signs_)) {
    v.diagnostics.push_back("could not show that every iteration is reached with positive probability");
    return v;
  }
  if (!difference_bounded(m, w, v.diagnostics)) return v;
  v.certified = true;
  v.witness = w;
  return v;
}

Verdict TerminationAnalysis::attempt(Goal goal) {
  std::set<Rule> excluded;
  try {
    excluded = rule_out();
  } catch (const std::exception&) {
  }
  Verdict v;
  v.goal = goal;
  if (excluded.count(rule_for(goal))) {
    v.ruled_out = excluded;
    v.diagnostics.push_back(to_string(rule_for(goal)) + " ruled out by the sign of the expected guard change");
    return v;
  }
  try {
    switch (goal) {
      case Goal::past: v = past(); break;
      case Goal::ast: v = ast(); break;
      case Goal::non_ast: v = non_ast(); break;
      case Goal::non_past: v = non_past(); break;
    }
  } catch (const AnalysisTimeout& e) {
    v.diagnostics.push_back(std::string("timeout: ") + e.what());
  } catch (const BranchExplosion& e) {
    v.diagnostics.push_back(std::string("branch explosion: ") + e.what());
  } catch (const AmbiguousSign& e) {
    v.diagnostics.push_back(std::string("ambiguous sign: ") + e.what());
  } catch (const SymbolicAmbiguity& e) {
    v.diagnostics.push_back(std::string("symbolic ambiguity: ") + e.what());
  } catch (const AnalysisFailure& e) {
    v.diagnostics.push_back(std::string("analysis failed: ") + e.what());
  }
  v.ruled_out = excluded;
  return v;
}

Verdict TerminationAnalysis::check_past() { return attempt(Goal::past); }
Verdict TerminationAnalysis::check_ast() { return attempt(Goal::ast); }
Verdict TerminationAnalysis::check_non_ast() { return attempt(Goal::non_ast); }
Verdict TerminationAnalysis::check_non_past() { return attempt(Goal::non_past); }

std::vector<Verdict> TerminationAnalysis::analyze(const std::set<Goal>& goals) {
  std::map<Goal, Verdict> done;
  auto certified = [&done](Goal g) {
    auto it = done.find(g);
    return it != done.end() && it->second.certified;
  };
  for (Goal goal : {Goal::past, Goal::ast, Goal::non_ast, Goal::non_past}) {
    if (!goals.count(goal)) continue;
    if ((goal == Goal::non_ast && (certified(Goal::past) || certified(Goal::ast))) ||
        (goal == Goal::non_past && certified(Goal::past))) {
      Verdict v;
      v.goal = goal;
      v.diagnostics.push_back("skipped: contradicts a certified termination verdict");
      done[goal] = v;
      continue;
    }
    Verdict v = attempt(goal);
    if (!v.certified && goal == Goal::ast && certified(Goal::past)) {
      v.certified = true;
      v.witness = done[Goal::past].witness;
      v.diagnostics.push_back("implied by certified PAST");
    }
    if (!v.certified && goal == Goal::non_past && certified(Goal::non_ast)) {
      v.certified = true;
      v.witness = done[Goal::non_ast].witness;
      v.diagnostics.push_back("implied by certified NonAST");
    }
    done[goal] = v;
  }
  std::vector<Verdict> out;
  for (auto& [g, v] : done) out.push_back(std::move(v));
  return out;
}

Verdict check_past(const ValidatedProgram& p, AnalysisOptions options) {
  return TerminationAnalysis(p, options).check_past();
}
Verdict check_ast(const ValidatedProgram& p, AnalysisOptions options) {
  return TerminationAnalysis(p, options).check_ast();
}
Verdict check_non_ast(const ValidatedProgram& p, AnalysisOptions options) {
  return TerminationAnalysis(p, options).check_non_ast();
}
Verdict check_non_past(const ValidatedProgram& p, AnalysisOptions options) {
  return TerminationAnalysis(p, options).check_non_past();
}
std::set<Rule> rule_out(const ValidatedProgram& p, AnalysisOptions options) {
  return TerminationAnalysis(p, options).rule_out();
}
std::vector<Verdict> analyze(const ValidatedProgram& p, const std::set<Goal>& goals, AnalysisOptions options) {
  return TerminationAnalysis(p, options).analyze(goals);
}

}  // namespace probterm
