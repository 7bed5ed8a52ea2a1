#include "probterm/moments.hpp"
#include "probterm/simulator.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace probterm;

namespace {

Polynomial var(std::size_t j) { return Polynomial::variable(j); }

SimulationOptions options(std::size_t runs, std::size_t steps, std::vector<Polynomial> tracked = {}) {
  SimulationOptions o;
  o.runs = runs;
  o.max_steps = steps;
  o.tracked = std::move(tracked);
  return o;
}

bool same(const SimulationStats& a, const SimulationStats& b) {
  if (a.terminated != b.terminated || a.diverged != b.diverged || a.per_step.size() != b.per_step.size()) return false;
  for (std::size_t k = 0; k < a.per_step.size(); ++k)
    for (std::size_t i = 0; i < a.per_step[k].size(); ++i) {
      const auto &x = a.per_step[k][i], &y = b.per_step[k][i];
      if (x.count != y.count || x.mean != y.mean || x.m2 != y.m2 || x.min != y.min || x.max != y.max) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("guard false from the start") {
  ValidatedProgram p = testing::from_source("x := 0\nwhile x > 0:\n  x = x");
  SimulationStats s = simulate(p, options(50, 100, {var(0)}));
  CHECK(s.termination_fraction == 1);
  CHECK(s.mean_steps_among_terminated == 0);
  CHECK(s.per_step[0][0].count == 0);
}

TEST_CASE("simulation is deterministic per seed") {
  ValidatedProgram p = testing::reference("dependent_square");
  auto o = options(500, 50, {var(0), var(1)});
  SimulationStats a = simulate(p, o), b = simulate(p, o);
  CHECK(same(a, b));
  o.seed = 43;
  CHECK_FALSE(same(a, simulate(p, o)));
}

TEST_CASE("termination counts and conditional samples") {
  ValidatedProgram p = testing::reference("symmetric_walk");
  SimulationStats s = simulate(p, options(2000, 300, {var(0)}));
  CHECK(s.termination_fraction * 2000 == Rational(s.terminated));
  const auto& steps = s.per_step[0];
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].count == 0) continue;
    CHECK(steps[i].min >= 1);
    if (i > 0) CHECK(steps[i].count <= steps[i - 1].count);
  }
  // Runs leave the sample exactly when they terminate.
  std::size_t still_running = steps.back().count;
  CHECK(s.terminated + still_running == 2000);
}

TEST_CASE("stuttering: a terminated run is never sampled again") {
  // x drops to 0 in one step with probability 1/2 and then would jump back
  // to 5 if the loop kept running.
  ValidatedProgram p = testing::from_source("x := 1\nwhile x > 0:\n  x = 0 @ 1/2; 5");
  SimulationStats s = simulate(p, options(4000, 20, {var(0)}));
  for (const auto& step : s.per_step[0])
    if (step.count) CHECK(step.min > 0);
  CHECK(s.per_step[0].back().count + s.terminated == 4000);
  CHECK(std::abs(double(s.per_step[0][1].count) - 2000) <= 4 * std::sqrt(1000.0));
}

TEST_CASE("branch frequencies are calibrated") {
  ValidatedProgram p = testing::reference("symmetric_walk");
  SimulationStats s = simulate(p, options(100000, 1, {var(0)}));
  double up = (s.per_step[0][1].mean - 9) / 2;
  CHECK(std::abs(up - 0.5) <= 4 * std::sqrt(0.25 / 100000));

  ValidatedProgram three = testing::from_source("x := 0\nwhile x > -1:\n  x = 1 @ 1/6; 2 @ 1/3; 3");
  SimulationStats t = simulate(three, options(100000, 1, {var(0)}));
  // Exact mean 1/6 + 2/3 + 3/2 = 7/3, variance 5/9.
  CHECK(std::abs(t.per_step[0][1].mean - 7.0 / 3) <= 4 * std::sqrt(5.0 / 9 / 100000));
}

TEST_CASE("biased walk often escapes") {
  ValidatedProgram p = testing::reference("biased_walk_up");
  SimulationStats s = simulate(p, options(2000, 2000));
  CHECK(s.termination_fraction < Rational(95, 100));
}

TEST_CASE("values stay exact beyond 64-bit range") {
  ValidatedProgram p = testing::from_source("x := 2\nwhile x > 0:\n  x = 3*x");
  auto o = options(3, 120, {var(0)});
  o.max_bits = 1024;
  SimulationStats s = simulate(p, o);
  for (std::size_t i = 0; i <= 120; i += 10) CHECK(s.per_step[0][i].mean == doctest::Approx(2 * std::pow(3.0, double(i))));

  ValidatedProgram q = testing::from_source("x := 1\ny := 0\nwhile x > 0:\n  x = 1/3*x + 1/7\n  y = y + x");
  auto oq = options(2, 60, {var(0), var(1)});
  SimulationStats sq = simulate(q, oq);
  auto xs = expected_closed_form(q, Monomial::variable(0)).closed_form;
  auto ys = expected_closed_form(q, Monomial::variable(1)).closed_form;
  for (unsigned i = 0; i <= 60; ++i) {
    CHECK(sq.per_step[0][i].mean == doctest::Approx(xs.evaluate(i).get_d()));
    CHECK(sq.per_step[1][i].mean == doctest::Approx(ys.evaluate(i).get_d()));
  }
}

TEST_CASE("divergent runs are reported") {
  ValidatedProgram p = testing::from_source("x := 2\ny := 2\nwhile x > 0:\n  x = 2*x @ 1/2; 3*x\n  y = 3*y + x^2");
  auto o = options(100, 1000);
  o.max_bits = 256;
  SimulationStats s = simulate(p, o);
  CHECK(s.diverged == 100);
  CHECK(s.terminated == 0);
}

TEST_CASE("csv export") {
  ValidatedProgram p = testing::reference("symmetric_walk");
  SimulationStats s = simulate(p, options(10, 3, {var(0)}));
  std::string csv = to_csv(s, {"x"});
  CHECK(csv.rfind("expression,i,count,mean,variance,min,max\n", 0) == 0);
  CHECK(csv.find("\"x\",0,10,10,0,10,10\n") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
