#include "probterm/exp_polynomial.hpp"
#include "probterm/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace probterm;

namespace {

const std::vector<std::string> names{"x", "y", "z"};

Polynomial var(std::size_t j) { return Polynomial::variable(j); }

Polynomial random_polynomial(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-4, 4), exp(0, 2), count(1, 4);
  Polynomial p;
  for (int t = count(rng); t > 0; --t)
  {
    Rational c(coeff(rng), 1 + exp(rng));
    c.canonicalize();
    p += Polynomial::term(Monomial({unsigned(exp(rng)), unsigned(exp(rng)), unsigned(exp(rng))}), c);
  }
  return p;
}

ExpPolynomial term(long c, unsigned degree, Rational base) { return ExpPolynomial::term(SymCoeff(c), degree, base); }

const ExpPolynomial i = ExpPolynomial::iteration();

ExpPolynomial random_exp_polynomial(std::mt19937_64& rng, int max_terms = 3) {
  static const std::vector<Rational> bases{Rational(1, 3), Rational(1, 2), Rational(2, 3), 1, Rational(3, 2), 2, 3};
  std::uniform_int_distribution<int> coeff(-3, 3), degree(0, 2), count(1, max_terms);
  std::uniform_int_distribution<std::size_t> base(0, bases.size() - 1);
  ExpPolynomial f;
  for (int t = count(rng); t > 0; --t) f += term(coeff(rng), unsigned(degree(rng)), bases[base(rng)]);
  return f;
}

double approx(const Rational& r) { return r.get_d(); }

}  // namespace

TEST_CASE("monomial order compares from the last variable") {
  Monomial x = Monomial::variable(0), y = Monomial::variable(1), x3 = Monomial::variable(0, 3);
  CHECK(compare(x, y) < 0);
  CHECK(compare(x3, y) < 0);
  CHECK(compare(x * y, y) > 0);
  CHECK(compare(Monomial(), x) < 0);
  CHECK(Monomial({1, 0, 0}) == x);
  CHECK(Monomial({2, 0, 2}).has_only_even_exponents());
  CHECK_FALSE((x * y).has_only_even_exponents());
}

TEST_CASE("polynomial rendering") {
  Polynomial p = Rational(-1, 2) * var(1).pow(2) + var(1) + Rational(3, 2);
  CHECK(to_string(p, names) == "-1/2*y^2 + y + 3/2");
  CHECK(to_string(Polynomial(), names) == "0");
  CHECK(to_string(var(0) * var(1) - var(0), names) == "x*y - x");
}

TEST_CASE("polynomial ring operations agree with evaluation") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> value(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Polynomial p = random_polynomial(rng), q = random_polynomial(rng);
    std::vector<Rational> at{Rational(value(rng), 2), Rational(value(rng)), Rational(value(rng), 3)};
    Rational pv = evaluate(p, at), qv = evaluate(q, at);
    CHECK(evaluate(p + q, at) == pv + qv);
    CHECK(evaluate(p - q, at) == pv - qv);
    CHECK(evaluate(p * q, at) == pv * qv);
    CHECK(evaluate(p.pow(3), at) == pv * pv * pv);

    std::vector<Rational> replaced = at;
    replaced[1] = qv;
    CHECK(evaluate(substitute(p, 1, q), at) == evaluate(p, replaced));
  }
  CHECK_THROWS_AS(var(0).pow(-1), std::domain_error);
}

TEST_CASE("substitution examples") {
  Polynomial x = var(0), y = var(1);
  CHECK(substitute(x * x + y, 0, y + Polynomial(1)) == y * y + Polynomial(3) * y + Polynomial(1));
  CHECK(substitute(x * y, 1, Polynomial(2)) == Polynomial(2) * x);
  CHECK(substitute(x + y, 2, x) == x + y);
}

TEST_CASE("exp polynomial arithmetic agrees with evaluation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    ExpPolynomial f = random_exp_polynomial(rng), g = random_exp_polynomial(rng);
    for (unsigned n : {0u, 1u, 2u, 7u, 20u}) {
      Rational fv = f.evaluate(n), gv = g.evaluate(n);
      CHECK((f + g).evaluate(n) == fv + gv);
      CHECK((f - g).evaluate(n) == fv - gv);
      CHECK((f * g).evaluate(n) == fv * gv);
      CHECK(f.pow(2).evaluate(n) == fv * fv);
      CHECK(f.shifted(3).evaluate(n) == f.evaluate(n + 3));
    }
  }
}

TEST_CASE("corrections override single values") {
  ExpPolynomial f = term(1, 0, 2);
  f.set_value_at(0, SymCoeff(5));
  CHECK(f.evaluate(0) == 5);
  CHECK(f.evaluate(1) == 2);
  CHECK(f.evaluate(4) == 16);
  CHECK(f.shifted().evaluate(0) == 2);
  CHECK(f.shifted().corrections().empty());
  CHECK(ExpPolynomial::term(SymCoeff(3), 0, 0).evaluate(0) == 3);
  CHECK(ExpPolynomial::term(SymCoeff(3), 0, 0).evaluate(1) == 0);
  CHECK(ExpPolynomial::term(SymCoeff(3), 0, 0).is_eventually_zero());
}

TEST_CASE("rendering of exponential polynomials") {
  CHECK(to_string(term(1, 0, 2)) == "2^i");
  CHECK(to_string(term(1, 0, Rational(1, 2))) == "2^(-i)");
  CHECK(to_string(term(1, 0, Rational(2, 3))) == "(2/3)^i");
  CHECK(to_string(term(-1, 2, 1)) == "-i^2");
}

TEST_CASE("symbolic coefficients") {
  SymCoeff c1 = SymCoeff::symbol(Symbol::c1), d = SymCoeff::symbol(Symbol::d);
  CHECK((c1 + Rational(3) * d).sign() == Sign::positive);
  CHECK((-c1 - d).sign() == Sign::negative);
  CHECK((c1 - d).sign() == Sign::ambiguous);
  CHECK((c1 + Rational(-1)).sign() == Sign::ambiguous);
  CHECK((c1 * SymCoeff(2)).factor(Symbol::c1) == 2);
  CHECK_THROWS_AS(c1 * d, std::domain_error);
  CHECK((c1 + Rational(3) * d).evaluate({2, 1, 5}) == 17);
  CHECK(to_string(c1 + Rational(3) * d) == "(c1 + 3*d)");
}

TEST_CASE("eventual sign examples") {
  CHECK(eventual_sign(i * i - 100 * i) == Sign::positive);
  CHECK(eventual_sign(term(1, 0, 2) - i.pow(5)) == Sign::positive);
  CHECK(eventual_sign(term(-1, 0, Rational(1, 2)) + ExpPolynomial(0)) == Sign::negative);
  CHECK(eventual_sign(ExpPolynomial()) == Sign::zero);
  ExpPolynomial only_start = ExpPolynomial::term(SymCoeff(4), 0, 0);
  CHECK(eventual_sign(only_start) == Sign::zero);
  CHECK(eventual_sign(ExpPolynomial(SymCoeff::symbol(Symbol::c1)) - 1) == Sign::ambiguous);
}

TEST_CASE("eventual sign matches large-index evaluation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    ExpPolynomial f = random_exp_polynomial(rng);
    int s = sgn(f.evaluate(600));
    Sign expected = s > 0 ? Sign::positive : s < 0 ? Sign::negative : Sign::zero;
    CHECK_MESSAGE(eventual_sign(f) == expected, to_string(f));
  }
}

TEST_CASE("limit examples") {
  using K = ExtendedRational::Kind;
  CHECK(limit_at_infinity(i) == ExtendedRational{K::positive_infinity, 0});
  CHECK(limit_at_infinity(3 - term(1, 2, Rational(1, 2))) == ExtendedRational{K::finite, 3});
  CHECK(limit_at_infinity(-term(1, 0, 2) + i * i) == ExtendedRational{K::negative_infinity, 0});
  CHECK(limit_at_infinity(ExpPolynomial()) == ExtendedRational{K::finite, 0});
  CHECK(limit_at_infinity(ExpPolynomial(SymCoeff::symbol(Symbol::d)) * i) == ExtendedRational{K::positive_infinity, 0});
  CHECK_THROWS_AS(limit_at_infinity(ExpPolynomial(SymCoeff::symbol(Symbol::c1))), SymbolicAmbiguity);
  CHECK_THROWS_AS(limit_at_infinity(ExpPolynomial(SymCoeff::symbol(Symbol::c1) - SymCoeff::symbol(Symbol::d)) * i),
                  SymbolicAmbiguity);
}

TEST_CASE("limits match far-out evaluation on random inputs") {
  using K = ExtendedRational::Kind;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    ExpPolynomial f = random_exp_polynomial(rng);
    Rational far = f.evaluate(2000), farther = f.evaluate(4000);
    ExtendedRational lim = limit_at_infinity(f);
    INFO(to_string(f));
    if (lim.kind == K::finite) {
      CHECK(std::abs(approx(far - lim.value)) < 1e-9);
    } else {
      double sign = lim.kind == K::positive_infinity ? 1 : -1;
      CHECK(sign * approx(far) > 1000);
      CHECK(sign * approx(farther - far) > 0);
    }
  }
}

TEST_CASE("dominating and dominated examples") {
  CHECK(dominating({i, term(1, 0, 2)}) == term(1, 0, 2));
  CHECK(dominating({-i, ExpPolynomial(-2)}) == ExpPolynomial(-1));
  CHECK(dominating({-i, ExpPolynomial()}) == ExpPolynomial());
  CHECK(dominated({i, -i * i}) == -i * i);
  CHECK(dominated({i * i, 5 * i + 3}) == i);
  CHECK(dominated({term(1, 0, Rational(1, 2)), ExpPolynomial(3)}) == term(1, 0, Rational(1, 2)));
  CHECK(dominating({term(-2, 0, Rational(1, 2)), term(-1, 1, 1)}) == term(-1, 0, Rational(1, 2)));
  // A mixed symbolic leading coefficient counts as positive when dominating.
  ExpPolynomial mixed = ExpPolynomial(SymCoeff::symbol(Symbol::c1) - SymCoeff::symbol(Symbol::d)) * i;
  CHECK(dominating({mixed}) == i);
  CHECK(dominated({mixed}) == -i);
}

TEST_CASE("domination contract holds on random sets") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> size(1, 4);
  std::size_t violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ExpPolynomial> fs;
    for (int k = size(rng); k > 0; --k) fs.push_back(random_exp_polynomial(rng));
    ExpPolynomial hi = dominating(fs), lo = dominated(fs);

    // Fit alpha > 0 once at i = 32, with a factor 2 slack, then check
    // alpha*g >= f (resp. <= f) over a window.
    const unsigned fit = 32;
    auto fitted = [&](const ExpPolynomial& g, bool upper) {
      double gv = approx(g.evaluate(fit));
      if (gv == 0) return 1.0;
      double alpha = gv > 0 ? (upper ? 0 : 1e300) : (upper ? 1e300 : 0);
      for (const auto& f : fs) {
        double ratio = approx(f.evaluate(fit)) / gv;
        alpha = (upper == (gv > 0)) ? std::max(alpha, ratio) : std::min(alpha, ratio);
      }
      if (upper == (gv > 0))
        return std::max(alpha, 1.0) * 2;
      return alpha > 0 ? alpha / 2 : 0.0;
    };
    double a_hi = fitted(hi, true), a_lo = fitted(lo, false);
    INFO("set: " << [&] {
      std::string s;
      for (const auto& f : fs) s += to_string(f) + " | ";
      return s + "hi " + to_string(hi) + " lo " + to_string(lo);
    }());
    CHECK(a_hi > 0);
    CHECK(a_lo > 0);
    for (unsigned n = fit; n <= 128; ++n) {
      double h = approx(hi.evaluate(n)), l = approx(lo.evaluate(n));
      for (const auto& f : fs) {
        double v = approx(f.evaluate(n));
        if (a_hi * h < v - 1e-9 * std::abs(v)) ++violations;
        if (a_lo * l > v + 1e-9 * std::abs(v)) ++violations;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("asymptotic classes") {
  CHECK(leading_class(3 * i * i - term(1, 0, 2)) == AsymptoticClass{Sign::negative, 2, 0});
  CHECK(compare(AsymptoticClass{Sign::negative, 2, 0}, AsymptoticClass{Sign::negative, 1, 0}) < 0);
  CHECK(compare(AsymptoticClass{Sign::zero, 1, 0}, AsymptoticClass{Sign::positive, Rational(1, 2), 0}) < 0);
  CHECK(compare_magnitude(AsymptoticClass{Sign::negative, 1, 3}, AsymptoticClass{Sign::positive, 2, 0}) < 0);
  CHECK(AsymptoticClass{Sign::negative, 1, 2}.realize() == -i * i);
  CHECK(is_O1(term(5, 3, Rational(1, 2))));
  CHECK(is_O1(ExpPolynomial(7)));
  CHECK_FALSE(is_O1(i));
  CHECK(is_Omega1(ExpPolynomial(-1)));
  CHECK_FALSE(is_Omega1(term(1, 0, Rational(1, 2))));
}

TEST_CASE("for-all checks are sound") {
  CHECK(nonnegative_for_all(i * i - 3 * i + 3));
  CHECK_FALSE(nonnegative_for_all(i * i - 3 * i + 2 - term(1, 0, Rational(1, 2))));
  CHECK(positive_for_all(term(1, 0, 2) - i));
  CHECK(bounded_below_zero_for_all(-1 - i));
  CHECK_FALSE(bounded_below_zero_for_all(-term(1, 0, Rational(1, 2))));
  CHECK_FALSE(nonnegative_for_all(ExpPolynomial(SymCoeff::symbol(Symbol::c1))));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    ExpPolynomial f = random_exp_polynomial(rng);
    bool nonneg = nonnegative_for_all(f), pos = positive_for_all(f), below = bounded_below_zero_for_all(f);
    for (unsigned n = 0; n <= 150; ++n) {
      int s = sgn(f.evaluate(n));
      if (nonneg) CHECK(s >= 0);
      if (pos) CHECK(s > 0);
      if (below) CHECK(s < 0);
    }
  }
}
