#pragma once

#include "probterm/polynomial.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace probterm {

struct Choice {
  Polynomial expression;
  std::optional<Rational> probability;  // absent on an implicit last branch

  friend bool operator==(const Choice&, const Choice&) = default;
};

struct UpdateRule {
  std::size_t variable = 0;
  std::vector<Choice> choices;

  friend bool operator==(const UpdateRule&, const UpdateRule&) = default;
};

enum class Relation { greater, less };

// Variables are numbered in update order.
struct Program {
  std::vector<std::string> variables;
  std::vector<Rational> initial_values;
  Polynomial guard_left;
  Relation relation = Relation::greater;
  Polynomial guard_right;
  std::vector<UpdateRule> updates;

  friend bool operator==(const Program&, const Program&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

enum class Clause {
  negative_self_coefficient,
  forward_reference,
  nonlinear_self_dependence,
  probability_sum,
  non_strict_guard,
  non_polynomial_guard,
  nested_loop,
  sequential_loops,
  conditional,
  non_constant_probability,
};

std::string to_string(Clause c);

class NotProbSolvable : public std::runtime_error {
 public:
  NotProbSolvable(Clause clause, const std::string& detail);
  Clause clause() const { return clause_; }

 private:
  Clause clause_;
};

Program parse_program(std::string_view source);
std::string pretty_print(const Program& program);

struct LinearChoice {
  Rational self_coefficient;
  Polynomial rest;
  Rational probability;
};

struct LinearUpdate {
  std::size_t variable = 0;
  std::vector<LinearChoice> choices;  // positive probabilities only
};

class ValidatedProgram {
 public:
  const Program& source() const { return source_; }
  const std::vector<std::string>& variables() const { return source_.variables; }
  std::size_t variable_count() const { return source_.variables.size(); }
  const std::vector<Rational>& initial_values() const { return source_.initial_values; }
  const Polynomial& guard() const { return guard_; }
  const std::vector<LinearUpdate>& updates() const { return updates_; }
  // Monomials reachable from the guard by repeated one-step expansion, in
  // ascending monomial order. Incomplete when the exploration hit its cap.
  const std::vector<Monomial>& monomial_universe() const { return universe_; }
  bool universe_complete() const { return universe_complete_; }

  Rational initial_value(const Monomial& m) const;
  Rational initial_value(const Polynomial& p) const;
  std::string render(const Polynomial& p) const { return to_string(p, variables()); }

 private:
  friend ValidatedProgram validate(const Program& program);
  Program source_;
  Polynomial guard_;
  std::vector<LinearUpdate> updates_;
  std::vector<Monomial> universe_;
  bool universe_complete_ = true;
};

ValidatedProgram validate(const Program& program);

}  // namespace probterm
