#include "probterm/program.hpp"
#include "probterm/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace probterm {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

std::string to_string(Clause c) {
  switch (c) {
    case Clause::negative_self_coefficient: return "negative self-coefficient";
    case Clause::forward_reference: return "forward reference";
    case Clause::nonlinear_self_dependence: return "non-linear self-dependence";
    case Clause::probability_sum: return "probabilities do not sum to 1";
    case Clause::non_strict_guard: return "non-strict guard";
    case Clause::non_polynomial_guard: return "non-polynomial guard";
    case Clause::nested_loop: return "nested loop";
    case Clause::sequential_loops: return "sequential loops";
    case Clause::conditional: return "conditional statement";
    case Clause::non_constant_probability: return "non-constant probability";
  }
  return "unknown clause";
}

NotProbSolvable::NotProbSolvable(Clause clause, const std::string& detail)
    : std::runtime_error("not Prob-solvable: " + to_string(clause) + (detail.empty() ? "" : " (" + detail + ")")),
      clause_(clause) {}

namespace {

enum class Tok { ident, number, op, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

struct Line {
  std::size_t number;
  std::size_t indent;
  std::vector<Token> tokens;
};

std::vector<Token> lex(std::string_view text, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < text.size()) {
    char ch = text[k];
    std::size_t column = k + 1;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++k;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = k;
      while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_')) ++k;
      out.push_back({Tok::ident, std::string(text.substr(start, k - start)), column});
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t start = k;
      while (k < text.size() && (std::isdigit(static_cast<unsigned char>(text[k])) || text[k] == '.')) ++k;
      out.push_back({Tok::number, std::string(text.substr(start, k - start)), column});
    } else {
      static const char* pairs[] = {":=", ">=", "<=", "==", "!="};
      std::string op(1, ch);
      for (const char* p : pairs)
        if (text.substr(k, 2) == p) op = p;
      if (op.size() == 1 && std::string_view("+-*/^()=@;:><,").find(ch) == std::string_view::npos)
        throw ParseError(std::string("unexpected character '") + ch + "'", lineno, column);
      k += op.size();
      out.push_back({Tok::op, op, column});
    }
  }
  out.push_back({Tok::end, "", text.size() + 1});
  return out;
}

class LineParser {
 public:
  LineParser(const Line& line, const std::map<std::string, std::size_t>& vars, std::size_t start = 0)
      : line_(line), vars_(vars), pos_(start) {}

  const Token& peek() const { return line_.tokens[pos_]; }
  bool at_op(std::string_view op) const { return peek().kind == Tok::op && peek().text == op; }
  bool at_end() const { return peek().kind == Tok::end; }
  const Token& advance() { return line_.tokens[pos_++]; }
  bool accept(std::string_view op) {
    if (!at_op(op)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view op, std::string_view what) {
    if (!accept(op)) fail("expected " + std::string(what));
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + (at_end() ? " at end of line" : ", found '" + peek().text + "'"), line_.number,
                     peek().column);
  }

  Polynomial expression() {
    Polynomial p = term();
    while (true) {
      if (accept("+"))
        p += term();
      else if (accept("-"))
        p -= term();
      else
        return p;
    }
  }

  Rational constant(std::string_view what) {
    const Token& start = peek();
    Polynomial p = expression();
    if (!p.is_constant()) throw ParseError(std::string(what) + " must be a rational constant", line_.number, start.column);
    return p.constant_term();
  }

 private:
  Polynomial term() {
    Polynomial p = unary();
    while (true) {
      if (accept("*")) {
        p *= unary();
      } else if (at_op("/")) {
        const Token& op = advance();
        Polynomial divisor = unary();
        if (!divisor.is_constant())
          throw ParseError("division by a non-constant expression is not polynomial", line_.number, op.column);
        if (divisor.is_zero()) throw ParseError("division by zero", line_.number, op.column);
        p *= Polynomial(Rational(1 / divisor.constant_term()));
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept("^")) {
      const Token& e = peek();
      if (e.kind != Tok::number || e.text.find('.') != std::string::npos)
        fail("exponent must be a non-negative integer literal");
      advance();
      base = base.pow(std::stoi(e.text));
    }
    return base;
  }

  Polynomial primary() {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      advance();
      try {
        return Polynomial(parse_rational(t.text));
      } catch (const std::invalid_argument&) {
        throw ParseError("malformed number '" + t.text + "'", line_.number, t.column);
      }
    }
    if (t.kind == Tok::ident) {
      auto it = vars_.find(t.text);
      if (it == vars_.end()) throw ParseError("unknown identifier " + t.text, line_.number, t.column);
      advance();
      return Polynomial::variable(it->second);
    }
    if (accept("(")) {
      Polynomial p = expression();
      expect(")", "')'");
      return p;
    }
    fail("expected an expression");
  }

  const Line& line_;
  const std::map<std::string, std::size_t>& vars_;
  std::size_t pos_;
};

bool starts_with_keyword(const Line& line, std::string_view word) {
  return line.tokens[0].kind == Tok::ident && line.tokens[0].text == word;
}

std::string describe_rational(const Rational& r) { return to_string(r); }

}  // namespace

Program parse_program(std::string_view source) {
  std::vector<Line> lines;
  std::size_t number = 0, pos = 0;
  while (pos <= source.size()) {
    auto nl = source.find('\n', pos);
    std::string_view text = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    auto tokens = lex(text, number);
    if (tokens.size() > 1) lines.push_back({number, text.find_first_not_of(" \t"), std::move(tokens)});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  const std::map<std::string, std::size_t> no_vars;
  struct Init {
    std::string name;
    Rational value;
    std::size_t line, column;
  };
  std::vector<Init> inits;
  std::size_t idx = 0;
  for (; idx < lines.size() && !starts_with_keyword(lines[idx], "while"); ++idx) {
    const Line& line = lines[idx];
    LineParser p(line, no_vars);
    do {
      const Token& name = p.peek();
      if (name.kind != Tok::ident) p.fail("expected a variable initialization");
      p.advance();
      p.expect(":=", "':='");
      inits.push_back({name.text, p.constant("initial value"), line.number, name.column});
    } while (p.accept(","));
    if (!p.at_end()) p.fail("expected end of line");
  }
  if (idx == lines.size())
    throw ParseError("expected a while loop", lines.empty() ? 1 : lines.back().number + 1, 1);
  const Line& header = lines[idx++];

  std::vector<const Line*> body;
  for (; idx < lines.size() && lines[idx].indent > header.indent; ++idx) {
    const Line& line = lines[idx];
    if (starts_with_keyword(line, "while")) throw NotProbSolvable(Clause::nested_loop, "line " + std::to_string(line.number));
    if (starts_with_keyword(line, "if")) throw NotProbSolvable(Clause::conditional, "line " + std::to_string(line.number));
    body.push_back(&line);
  }
  if (idx < lines.size()) {
    const Line& line = lines[idx];
    if (starts_with_keyword(line, "while"))
      throw NotProbSolvable(Clause::sequential_loops, "line " + std::to_string(line.number));
    if (starts_with_keyword(line, "if")) throw NotProbSolvable(Clause::conditional, "line " + std::to_string(line.number));
    throw ParseError("unexpected statement after the loop body", line.number, line.tokens[0].column);
  }
  if (body.empty()) throw ParseError("loop body is empty", header.number, header.tokens[0].column);

  Program program;
  std::map<std::string, std::size_t> vars;
  for (const Line* line : body) {
    const Token& name = line->tokens[0];
    if (name.kind != Tok::ident || line->tokens[1].text != "=")
      throw ParseError("expected an assignment 'x = ...'", line->number, name.column);
    auto known = std::find_if(inits.begin(), inits.end(), [&](const Init& i) { return i.name == name.text; });
    if (known == inits.end()) throw ParseError("unknown identifier " + name.text, line->number, name.column);
    if (vars.count(name.text)) throw ParseError("second update of " + name.text, line->number, name.column);
    vars[name.text] = program.variables.size();
    program.variables.push_back(name.text);
  }
  program.initial_values.resize(program.variables.size());
  std::set<std::string> initialized;
  for (const auto& init : inits) {
    if (!initialized.insert(init.name).second)
      throw ParseError("second initialization of " + init.name, init.line, init.column);
    auto it = vars.find(init.name);
    if (it == vars.end())
      throw ParseError("variable " + init.name + " has no update (write '" + init.name + " = " + init.name +
                           "' to keep it constant)",
                       init.line, init.column);
    program.initial_values[it->second] = init.value;
  }

  {
    LineParser p(header, vars, 1);
    for (const auto& t : header.tokens)
      if (t.kind == Tok::ident && (t.text == "and" || t.text == "or" || t.text == "not"))
        throw NotProbSolvable(Clause::non_polynomial_guard, "boolean connective '" + t.text + "'");
    try {
      program.guard_left = p.expression();
    } catch (const ParseError& e) {
      if (std::string(e.what()).find("non-constant") != std::string::npos)
        throw NotProbSolvable(Clause::non_polynomial_guard, e.what());
      throw;
    }
    if (p.at_op(">=") || p.at_op("<="))
      throw NotProbSolvable(Clause::non_strict_guard, "'" + p.peek().text + "' on line " + std::to_string(header.number) +
                                                          "; use a strict comparison '>' or '<'");
    if (p.at_op("==") || p.at_op("!="))
      throw NotProbSolvable(Clause::non_strict_guard, "'" + p.peek().text + "' on line " + std::to_string(header.number));
    if (p.accept(">"))
      program.relation = Relation::greater;
    else if (p.accept("<"))
      program.relation = Relation::less;
    else
      p.fail("expected '>' or '<'");
    try {
      program.guard_right = p.expression();
    } catch (const ParseError& e) {
      if (std::string(e.what()).find("non-constant") != std::string::npos)
        throw NotProbSolvable(Clause::non_polynomial_guard, e.what());
      throw;
    }
    p.expect(":", "':' after the loop guard");
    if (!p.at_end()) p.fail("expected end of line");
  }

  for (const Line* line : body) {
    LineParser p(*line, vars, 2);
    UpdateRule rule;
    rule.variable = program.updates.size();
    while (true) {
      Choice choice;
      choice.expression = p.expression();
      if (p.at_op("@")) {
        const Token& at = p.advance();
        std::size_t column = p.peek().column;
        Polynomial prob;
        try {
          prob = p.expression();
        } catch (const ParseError& e) {
          if (std::string(e.what()).find("non-constant") != std::string::npos)
            throw NotProbSolvable(Clause::non_constant_probability, "line " + std::to_string(line->number));
          throw;
        }
        if (!prob.is_constant())
          throw NotProbSolvable(Clause::non_constant_probability, "line " + std::to_string(line->number));
        Rational value = prob.constant_term();
        if (sgn(value) < 0 || value > 1)
          throw ParseError("probability literal outside [0,1]: " + describe_rational(value), line->number, column);
        (void)at;
        choice.probability = value;
        rule.choices.push_back(std::move(choice));
        if (p.at_end()) break;
        p.expect(";", "';' after the probability");
        continue;
      }
      rule.choices.push_back(std::move(choice));
      if (!p.at_end()) p.fail("expected '@' or end of line");
      break;
    }
    program.updates.push_back(std::move(rule));
  }
  return program;
}

std::string pretty_print(const Program& program) {
  std::string out;
  const auto& names = program.variables;
  for (std::size_t k = 0; k < names.size(); ++k) out += names[k] + " := " + to_string(program.initial_values[k]) + "\n";
  out += "while " + to_string(program.guard_left, names) + (program.relation == Relation::greater ? " > " : " < ") +
         to_string(program.guard_right, names) + ":\n";
  for (const auto& rule : program.updates) {
    out += "  " + names[rule.variable] + " = ";
    for (std::size_t k = 0; k < rule.choices.size(); ++k) {
      const auto& c = rule.choices[k];
      out += to_string(c.expression, names);
      if (c.probability) out += " @ " + to_string(*c.probability);
      if (k + 1 < rule.choices.size()) out += "; ";
    }
    out += "\n";
  }
  return out;
}

Rational ValidatedProgram::initial_value(const Monomial& m) const {
  return evaluate(m, source_.initial_values);
}

Rational ValidatedProgram::initial_value(const Polynomial& p) const {
  return evaluate(p, source_.initial_values);
}

ValidatedProgram validate(const Program& program) {
  ValidatedProgram vp;
  vp.source_ = program;
  const auto& names = program.variables;
  for (const auto& rule : program.updates) {
    const std::size_t j = rule.variable;
    const std::string& x = names[j];
    LinearUpdate update{j, {}};
    Rational explicit_sum(0);
    bool has_implicit = false;
    for (const auto& choice : rule.choices) {
      const Polynomial& e = choice.expression;
      for (std::size_t k = j + 1; k < names.size(); ++k)
        if (e.mentions(k))
          throw NotProbSolvable(Clause::forward_reference, "update of " + x + " uses later variable " + names[k]);
      const Monomial self = Monomial::variable(j);
      for (const auto& [m, c] : e.terms())
        if (m.exponent(j) > 0 && m != self)
          throw NotProbSolvable(Clause::nonlinear_self_dependence, "update of " + x + " contains " + to_string(m, names));
      Rational a = e.coefficient(self);
      if (sgn(a) < 0)
        throw NotProbSolvable(Clause::negative_self_coefficient, "coefficient " + to_string(a) + " of " + x);
      Polynomial rest = e - Polynomial::term(self, a);
      if (choice.probability)
        explicit_sum += *choice.probability;
      else
        has_implicit = true;
      update.choices.push_back({a, rest, choice.probability.value_or(Rational(0))});
    }
    if (has_implicit) {
      if (explicit_sum >= 1)
        throw NotProbSolvable(Clause::probability_sum, "explicit probabilities of " + x + " sum to " +
                                                           to_string(explicit_sum) + " leaving nothing for the last branch");
      update.choices.back().probability = 1 - explicit_sum;
    } else if (explicit_sum != 1) {
      throw NotProbSolvable(Clause::probability_sum, "probabilities of " + x + " sum to " + to_string(explicit_sum));
    }
    std::erase_if(update.choices, [](const LinearChoice& c) { return sgn(c.probability) == 0; });
    vp.updates_.push_back(std::move(update));
  }
  vp.guard_ = program.relation == Relation::greater ? program.guard_left - program.guard_right
                                                     : program.guard_right - program.guard_left;

  constexpr std::size_t universe_cap = 1000;
  std::set<Monomial, MonomialLess> seen;
  std::vector<Monomial> work;
  auto visit = [&](const Monomial& m) {
    if (seen.insert(m).second) work.push_back(m);
  };
  for (const auto& [m, c] : vp.guard_.terms()) visit(m);
  for (std::size_t j = 0; j < names.size(); ++j) visit(Monomial::variable(j));
  try {
    while (!work.empty()) {
      if (seen.size() > universe_cap) {
        vp.universe_complete_ = false;
        break;
      }
      Monomial m = work.back();
      work.pop_back();
      for (const auto& branch : one_step_distribution(vp, Polynomial::term(m, Rational(1))))
        for (const auto& [n, c] : branch.expression.terms()) visit(n);
    }
  } catch (const BranchExplosion&) {
    vp.universe_complete_ = false;
  }
  vp.universe_.assign(seen.begin(), seen.end());
  return vp;
}

}  // namespace probterm
