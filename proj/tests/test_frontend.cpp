#include "support.hpp"

#include <doctest.h>

using namespace probterm;
using testing::from_source;

namespace {

Polynomial var(std::size_t j) { return Polynomial::variable(j); }
Polynomial constant(long c) { return Polynomial(Rational(c)); }

Clause clause_of(std::string_view source) {
  try {
    validate(parse_program(source));
  } catch (const NotProbSolvable& e) {
    return e.clause();
  }
  FAIL("expected a NotProbSolvable diagnosis");
  return Clause::conditional;
}

}  // namespace

TEST_CASE("symmetric walk parses") {
  Program p = parse_program("x := 10\nwhile x > 0:\n  x = x + 1 @ 1/2; x - 1");
  CHECK(p.variables == std::vector<std::string>{"x"});
  CHECK(p.initial_values == std::vector<Rational>{10});
  CHECK(p.relation == Relation::greater);
  CHECK(p.guard_left == var(0));
  CHECK(p.guard_right == Polynomial());
  REQUIRE(p.updates.size() == 1);
  REQUIRE(p.updates[0].choices.size() == 2);
  CHECK(p.updates[0].choices[0].expression == var(0) + constant(1));
  CHECK(p.updates[0].choices[0].probability == Rational(1, 2));
  CHECK(p.updates[0].choices[1].expression == var(0) - constant(1));
  CHECK_FALSE(p.updates[0].choices[1].probability.has_value());

  ValidatedProgram v = validate(p);
  CHECK(v.updates()[0].choices[1].probability == Rational(1, 2));
}

TEST_CASE("identity update") {
  ValidatedProgram v = from_source("x := 0\nwhile x > 0:\n  x = x");
  REQUIRE(v.updates()[0].choices.size() == 1);
  CHECK(v.updates()[0].choices[0].self_coefficient == 1);
  CHECK(v.updates()[0].choices[0].probability == 1);
}

TEST_CASE("literals stay exact") {
  Program p = parse_program("x := 0.1\nwhile x < 2/3:\n  x = 0.25*x + 1/3 @ 0.3; x");
  CHECK(p.initial_values[0] == Rational(1, 10));
  CHECK(p.guard_right == Polynomial(Rational(2, 3)));
  CHECK(p.updates[0].choices[0].expression == Rational(1, 4) * var(0) + Polynomial(Rational(1, 3)));
  CHECK(p.updates[0].choices[0].probability == Rational(3, 10));
}

TEST_CASE("bounded 2d walk guard") {
  ValidatedProgram v = testing::reference("bounded_2d_walk");
  CHECK(v.guard() == constant(100) - var(0) * var(0) - var(1) * var(1));
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_program("x := 1\nwhile x > 0:\n  x = 2*x + y");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
    CHECK(e.line() == 3);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_program("x := 1\nwhile x > 0:\n  x = x + @ 1/2; x"), ParseError);
  CHECK_THROWS_AS(parse_program("x := 1\nwhile x > 0:\n  x = x + 1 @ 3/2; x"), ParseError);
  CHECK_THROWS_AS(parse_program("x := 1\nwhile x > 0:\n  x = x^y"), ParseError);
  CHECK_THROWS_AS(parse_program("x := 1\nwhile x > 0:\n"), ParseError);
  CHECK_THROWS_AS(parse_program("x := 1\ny := 2\nwhile x > 0:\n  x = x"), ParseError);
  CHECK_THROWS_AS(parse_program("x := y\nwhile x > 0:\n  x = x"), ParseError);
}

TEST_CASE("Prob-solvable restrictions") {
  CHECK(clause_of("x := 1\ny := 1\nwhile x > 0:\n  x = x + y\n  y = y") == Clause::forward_reference);
  CHECK(clause_of("x := 1\nwhile x > 0:\n  x = -2*x + 1") == Clause::negative_self_coefficient);
  CHECK(clause_of("x := 1\nwhile x > 0:\n  x = x^2") == Clause::nonlinear_self_dependence);
  CHECK(clause_of("x := 1\ny := 0\nwhile x > 0:\n  y = y + 1\n  x = x*y") == Clause::nonlinear_self_dependence);
  CHECK(clause_of("x := 1\nwhile x > 0:\n  x = x + 1 @ 2/3; x @ 2/3; x") == Clause::probability_sum);
  CHECK(clause_of("x := 1\nwhile x >= 0:\n  x = x") == Clause::non_strict_guard);
  CHECK(clause_of("x := 1\nwhile x > 0 and x < 3:\n  x = x") == Clause::non_polynomial_guard);
  CHECK(clause_of("x := 1\nwhile x > 0:\n  x = x + 1 @ x/2; x") == Clause::non_constant_probability);
  CHECK(testing::valid_corpus().size() > 40);
}

TEST_CASE("structural rejections name the clause") {
  const auto bench = testing::corpus_dir() / "bench";
  CHECK(clause_of(testing::read_file(bench / "nested_loops.prob")) == Clause::nested_loop);
  CHECK(clause_of(testing::read_file(bench / "sequential_loops.prob")) == Clause::sequential_loops);
  CHECK(clause_of(testing::read_file(bench / "fair_in_limit_random_walk.prob")) == Clause::non_constant_probability);
  CHECK(clause_of("x := 1\nwhile x > 0:\n  if x > 2:\n    x = x") == Clause::conditional);
}

TEST_CASE("less-than guards are normalized") {
  ValidatedProgram v = from_source("x := 0\nwhile x < 5:\n  x = x + 1");
  CHECK(v.guard() == constant(5) - var(0));
}

TEST_CASE("variables follow update order") {
  ValidatedProgram v = from_source("x := 3\ny := 4\nwhile x > 0:\n  y = y + 1\n  x = x - y");
  CHECK(v.variables() == std::vector<std::string>{"y", "x"});
  CHECK(v.initial_values() == std::vector<Rational>{4, 3});
}

TEST_CASE("zero-probability choices are dropped") {
  ValidatedProgram v = from_source("x := 3\nwhile x > 0:\n  x = x + 1 @ 0; x - 1");
  REQUIRE(v.updates()[0].choices.size() == 1);
  CHECK(v.updates()[0].choices[0].rest == constant(-1));
}

TEST_CASE("pretty printing round trips on corpus and random programs") {
  for (const auto& [name, v] : testing::valid_corpus()) {
    INFO(name);
    CHECK(parse_program(pretty_print(v.source())) == v.source());
  }
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::string source = testing::random_program(rng);
    INFO(source);
    Program p = parse_program(source);
    CHECK(parse_program(pretty_print(p)) == p);
  }
}

TEST_CASE("validation is total on random programs") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    std::string source = testing::random_program(rng);
    INFO(source);
    CHECK_NOTHROW(validate(parse_program(source)));
  }
}

TEST_CASE("monomial universe is closed and ordered") {
  for (const auto& [name, v] : testing::valid_corpus()) {
    INFO(name);
    const auto& universe = v.monomial_universe();
    REQUIRE(v.universe_complete());
    CHECK(std::is_sorted(universe.begin(), universe.end(), MonomialLess()));
    for (const auto& [m, c] : v.guard().terms())
      CHECK(std::binary_search(universe.begin(), universe.end(), m, MonomialLess()));
  }
}

TEST_CASE("monomial order is total and compatible with products") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<unsigned> e(0, 3);
  auto random_monomial = [&] { return Monomial({e(rng), e(rng), e(rng)}); };
  for (int trial = 0; trial < 2000; ++trial) {
    Monomial a = random_monomial(), b = random_monomial();
    auto ab = compare(a, b), ba = compare(b, a);
    CHECK((ab < 0) == (ba > 0));
    CHECK((ab == 0) == (a == b));
    Monomial y1 = random_monomial(), z1 = random_monomial(), y2 = random_monomial(), z2 = random_monomial();
    if (compare(y1, z1) <= 0 && compare(y2, z2) <= 0) CHECK(compare(y1 * y2, z1 * z2) <= 0);
  }
}
