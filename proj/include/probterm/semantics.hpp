#pragma once

#include "probterm/program.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace probterm {

struct Branch {
  Polynomial expression;
  Rational probability;
};

using OneStepDistribution = std::vector<Branch>;

inline constexpr std::size_t default_branch_cap = 4096;

class BranchExplosion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AnalysisTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Branches of expr after one loop iteration, expressed over the current state.
OneStepDistribution one_step_distribution(const ValidatedProgram& p, const Polynomial& expr,
                                          std::size_t cap = default_branch_cap);

Polynomial expected_value(const OneStepDistribution& d);
Polynomial martingale_expression(const ValidatedProgram& p, const Polynomial& expr,
                                 std::size_t cap = default_branch_cap);

struct SignSet {
  bool positive = true;
  bool negative = true;

  bool only_nonnegative() const { return !negative; }
  bool only_nonpositive() const { return !positive; }
  friend bool operator==(const SignSet&, const SignSet&) = default;
};

std::string to_string(const SignSet& s);

using Clock = std::chrono::steady_clock;

// Shared per-analysis state: memoized monomial branches, branch cap, deadline.
class BranchCache {
 public:
  explicit BranchCache(const ValidatedProgram& program, std::size_t cap = default_branch_cap,
                       std::optional<Clock::time_point> deadline = std::nullopt);

  const ValidatedProgram& program() const { return program_; }
  const OneStepDistribution& of(const Monomial& m);
  OneStepDistribution of(const Polynomial& p);
  void check_deadline() const;

 private:
  const ValidatedProgram& program_;
  std::size_t cap_;
  std::optional<Clock::time_point> deadline_;
  std::map<Monomial, OneStepDistribution, MonomialLess> memo_;
};

class SignAnalysis {
 public:
  explicit SignAnalysis(BranchCache& branches) : branches_(branches) {}
  SignSet oversign(const Monomial& m);

 private:
  SignSet by_branches(const Monomial& m);
  BranchCache& branches_;
  std::map<Monomial, SignSet, MonomialLess> memo_;
  std::set<Monomial, MonomialLess> in_progress_;
};

class MomentEngine;

bool can_reach_any_iteration(BranchCache& branches, MomentEngine& moments, SignAnalysis& signs);

SignSet oversign(const ValidatedProgram& p, const Monomial& m);
bool can_reach_any_iteration(const ValidatedProgram& p);

}  // namespace probterm
