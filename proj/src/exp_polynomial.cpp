#include "probterm/exp_polynomial.hpp"

#include <algorithm>
#include <optional>

namespace probterm {

std::string to_string(Sign s) {
  switch (s) {
    case Sign::negative: return "-";
    case Sign::zero: return "0";
    case Sign::positive: return "+";
    case Sign::ambiguous: return "ambiguous";
  }
  return "?";
}

SymCoeff SymCoeff::symbol(Symbol s, const Rational& factor) {
  SymCoeff c;
  c.k_[static_cast<int>(s)] = factor;
  return c;
}

bool SymCoeff::is_zero() const {
  return std::all_of(k_.begin(), k_.end(), [](const Rational& k) { return sgn(k) == 0; });
}

bool SymCoeff::is_symbolic() const {
  return sgn(k_[1]) != 0 || sgn(k_[2]) != 0 || sgn(k_[3]) != 0;
}

Sign SymCoeff::sign() const {
  bool any_positive = false, any_negative = false;
  for (const auto& k : k_) {
    any_positive |= sgn(k) > 0;
    any_negative |= sgn(k) < 0;
  }
  if (any_positive && any_negative) return Sign::ambiguous;
  if (any_positive) return Sign::positive;
  if (any_negative) return Sign::negative;
  return Sign::zero;
}

Rational SymCoeff::evaluate(const SymbolValues& v) const {
  return k_[0] + k_[1] * v.c1 + k_[2] * v.c2 + k_[3] * v.d;
}

SymCoeff SymCoeff::operator-() const {
  SymCoeff r;
  for (int j = 0; j < 4; ++j) r.k_[j] = -k_[j];
  return r;
}

SymCoeff& SymCoeff::operator+=(const SymCoeff& o) {
  for (int j = 0; j < 4; ++j) k_[j] += o.k_[j];
  return *this;
}

SymCoeff& SymCoeff::operator-=(const SymCoeff& o) {
  for (int j = 0; j < 4; ++j) k_[j] -= o.k_[j];
  return *this;
}

SymCoeff& SymCoeff::operator*=(const Rational& r) {
  for (auto& k : k_) k *= r;
  return *this;
}

SymCoeff operator*(const SymCoeff& a, const SymCoeff& b) {
  if (!a.is_symbolic()) return b * a.constant();
  if (!b.is_symbolic()) return a * b.constant();
  throw std::domain_error("product of two symbolic coefficients");
}

std::string to_string(const SymCoeff& c) {
  static const char* names[] = {"", "c1", "c2", "d"};
  std::string out;
  int parts = 0;
  for (int j : {1, 2, 3, 0}) {
    const Rational& value = j == 0 ? c.constant() : c.factor(static_cast<Symbol>(j));
    if (sgn(value) == 0) continue;
    ++parts;
    Rational magnitude = abs(value);
    if (out.empty())
      out += sgn(value) < 0 ? "-" : "";
    else
      out += sgn(value) < 0 ? " - " : " + ";
    if (j == 0)
      out += to_string(magnitude);
    else
      out += (magnitude == 1 ? "" : to_string(magnitude) + "*") + names[j];
  }
  if (parts == 0) return "0";
  return parts > 1 ? "(" + out + ")" : out;
}

ExpPolynomial::ExpPolynomial(const SymCoeff& constant) { add_term(Rational(1), 0, constant); }

ExpPolynomial ExpPolynomial::term(const SymCoeff& coefficient, unsigned degree, const Rational& base) {
  if (sgn(base) < 0) throw std::domain_error("negative base in exponential polynomial");
  ExpPolynomial f;
  if (sgn(base) == 0) {
    if (degree == 0 && !coefficient.is_zero()) f.corrections_[0] = coefficient;
    return f;
  }
  f.add_term(base, degree, coefficient);
  return f;
}

void ExpPolynomial::add_term(const Rational& base, unsigned degree, const SymCoeff& c) {
  if (c.is_zero()) return;
  auto& coeffs = terms_[base];
  if (coeffs.size() <= degree) coeffs.resize(degree + 1);
  coeffs[degree] += c;
  normalize();
}

void ExpPolynomial::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    auto& coeffs = it->second;
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    it = coeffs.empty() ? terms_.erase(it) : std::next(it);
  }
  std::erase_if(corrections_, [](const auto& kv) { return kv.second.is_zero(); });
}

bool ExpPolynomial::is_symbolic() const {
  for (const auto& [b, coeffs] : terms_)
    for (const auto& c : coeffs)
      if (c.is_symbolic()) return true;
  for (const auto& [k, c] : corrections_)
    if (c.is_symbolic()) return true;
  return false;
}

bool ExpPolynomial::is_constant() const {
  if (!corrections_.empty()) return false;
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == 1 && terms_.begin()->second.size() == 1;
}

SymCoeff ExpPolynomial::terms_value_at(unsigned i) const {
  SymCoeff sum;
  for (const auto& [b, coeffs] : terms_) {
    Rational bi = power(b, i);
    Rational ik(1);
    for (const auto& c : coeffs) {
      sum += c * Rational(ik * bi);
      ik *= i;
    }
  }
  return sum;
}

SymCoeff ExpPolynomial::value_at(unsigned i) const {
  SymCoeff v = terms_value_at(i);
  if (auto it = corrections_.find(i); it != corrections_.end()) v += it->second;
  return v;
}

Rational ExpPolynomial::evaluate(unsigned i, const SymbolValues& values) const {
  return value_at(i).evaluate(values);
}

void ExpPolynomial::set_value_at(unsigned i, const SymCoeff& value) {
  SymCoeff c = value - terms_value_at(i);
  if (c.is_zero())
    corrections_.erase(i);
  else
    corrections_[i] = c;
}

ExpPolynomial ExpPolynomial::shifted(unsigned by) const {
  ExpPolynomial r;
  for (const auto& [b, coeffs] : terms_) {
    Rational scale = power(b, by);
    for (unsigned j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j].is_zero()) continue;
      for (unsigned k = 0; k <= j; ++k)
        r.add_term(b, k, coeffs[j] * Rational(scale * binomial(j, k) * power(Rational(by), j - k)));
    }
  }
  for (const auto& [k, c] : corrections_)
    if (k >= by) r.corrections_[k - by] = c;
  r.normalize();
  return r;
}

ExpPolynomial ExpPolynomial::pow(unsigned exponent) const {
  ExpPolynomial result(1), base = *this;
  for (unsigned e = exponent; e; e >>= 1) {
    if (e & 1) result *= base;
    if (e > 1) base *= base;
  }
  return result;
}

ExpPolynomial ExpPolynomial::substitute_symbols(const SymbolValues& values) const {
  ExpPolynomial r;
  for (const auto& [b, coeffs] : terms_)
    for (unsigned j = 0; j < coeffs.size(); ++j) r.add_term(b, j, coeffs[j].evaluate(values));
  for (const auto& [k, c] : corrections_) r.corrections_[k] = c.evaluate(values);
  r.normalize();
  return r;
}

ExpPolynomial ExpPolynomial::operator-() const {
  ExpPolynomial r = *this;
  for (auto& [b, coeffs] : r.terms_)
    for (auto& c : coeffs) c = -c;
  for (auto& [k, c] : r.corrections_) c = -c;
  return r;
}

ExpPolynomial& ExpPolynomial::operator+=(const ExpPolynomial& o) {
  for (const auto& [b, coeffs] : o.terms_) {
    auto& mine = terms_[b];
    if (mine.size() < coeffs.size()) mine.resize(coeffs.size());
    for (unsigned j = 0; j < coeffs.size(); ++j) mine[j] += coeffs[j];
  }
  for (const auto& [k, c] : o.corrections_) corrections_[k] += c;
  normalize();
  return *this;
}

ExpPolynomial& ExpPolynomial::operator-=(const ExpPolynomial& o) { return *this += -o; }

ExpPolynomial& ExpPolynomial::operator*=(const ExpPolynomial& o) {
  std::map<unsigned, SymCoeff> values;
  for (const auto& [k, c] : corrections_) values[k];
  for (const auto& [k, c] : o.corrections_) values[k];
  for (auto& [k, v] : values) v = value_at(k) * o.value_at(k);

  ExpPolynomial r;
  for (const auto& [b1, p1] : terms_) {
    for (const auto& [b2, p2] : o.terms_) {
      Rational base = b1 * b2;
      auto& coeffs = r.terms_[base];
      if (coeffs.size() < p1.size() + p2.size() - 1) coeffs.resize(p1.size() + p2.size() - 1);
      for (unsigned j = 0; j < p1.size(); ++j)
        for (unsigned k = 0; k < p2.size(); ++k) coeffs[j + k] += p1[j] * p2[k];
    }
  }
  r.normalize();
  for (const auto& [k, v] : values) r.set_value_at(k, v);
  return *this = std::move(r);
}

namespace {

std::string render_base(const Rational& b) {
  if (b == 1) return "";
  if (b.get_num() == 1) return b.get_den().get_str() + "^(-i)";
  if (b.get_den() == 1) return b.get_num().get_str() + "^i";
  return "(" + b.get_str() + ")^i";
}

}  // namespace

std::string to_string(const ExpPolynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  auto append = [&out](const SymCoeff& c, const std::string& factor) {
    std::string coeff = to_string(c);
    bool negative = coeff.front() == '-';
    if (negative) coeff.erase(0, 1);
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    if (factor.empty())
      out += coeff;
    else if (coeff == "1")
      out += factor;
    else
      out += coeff + "*" + factor;
  };
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [b, coeffs] = *it;
    std::string base = render_base(b);
    for (unsigned j = coeffs.size(); j-- > 0;) {
      if (coeffs[j].is_zero()) continue;
      std::string factor;
      if (j == 1) factor = "i";
      if (j > 1) factor = "i^" + std::to_string(j);
      if (!base.empty()) factor += factor.empty() ? base : "*" + base;
      append(coeffs[j], factor);
    }
  }
  for (const auto& [k, c] : f.corrections())
    append(c, "[i=" + std::to_string(k) + "]");
  return out;
}

ExpPolynomial AsymptoticClass::realize() const {
  if (sign == Sign::zero) return {};
  return ExpPolynomial::term(SymCoeff(sign == Sign::negative ? -1 : 1), degree, base);
}

std::strong_ordering compare_magnitude(const AsymptoticClass& a, const AsymptoticClass& b) {
  if (a.base != b.base) return a.base < b.base ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.degree <=> b.degree;
}

std::strong_ordering compare(const AsymptoticClass& a, const AsymptoticClass& b) {
  auto rank = [](Sign s) {
    switch (s) {
      case Sign::negative: return 0;
      case Sign::zero: return 1;
      case Sign::positive: return 2;
      case Sign::ambiguous: break;
    }
    throw std::logic_error("comparing an ambiguous asymptotic class");
  };
  if (auto c = rank(a.sign) <=> rank(b.sign); c != 0) return c;
  if (a.sign == Sign::zero) return std::strong_ordering::equal;
  auto m = compare_magnitude(a, b);
  return a.sign == Sign::positive ? m : 0 <=> m;
}

std::string to_string(const AsymptoticClass& c) {
  if (c.sign == Sign::zero) return "0";
  auto text = to_string(c.realize());
  return c.sign == Sign::ambiguous ? "±(" + text + ")" : text;
}

AsymptoticClass leading_class(const ExpPolynomial& f, Sign mixed_as) {
  if (f.terms().empty()) return {};
  const auto& [base, coeffs] = *f.terms().rbegin();
  AsymptoticClass c{coeffs.back().sign(), base, static_cast<unsigned>(coeffs.size() - 1)};
  if (c.sign == Sign::ambiguous) c.sign = mixed_as;
  return c;
}

Sign eventual_sign(const ExpPolynomial& f) { return leading_class(f).sign; }

std::string to_string(const ExtendedRational& e) {
  switch (e.kind) {
    case ExtendedRational::Kind::negative_infinity: return "-inf";
    case ExtendedRational::Kind::positive_infinity: return "inf";
    case ExtendedRational::Kind::finite: break;
  }
  return to_string(e.value);
}

ExtendedRational limit_at_infinity(const ExpPolynomial& f) {
  AsymptoticClass c = leading_class(f);
  if (c.sign == Sign::zero || c.base < 1) return {};
  if (c.base == 1 && c.degree == 0) {
    const SymCoeff& k = f.terms().rbegin()->second.front();
    if (k.is_symbolic()) throw SymbolicAmbiguity("limit depends on symbolic constants");
    return {ExtendedRational::Kind::finite, k.constant()};
  }
  if (c.sign == Sign::ambiguous) throw SymbolicAmbiguity("sign of the limit depends on symbolic constants");
  return {c.sign == Sign::positive ? ExtendedRational::Kind::positive_infinity
                                   : ExtendedRational::Kind::negative_infinity,
          0};
}

ExpPolynomial dominating(std::span<const ExpPolynomial> fs) {
  std::optional<AsymptoticClass> best;
  for (const auto& f : fs) {
    auto c = leading_class(f, Sign::positive);
    if (!best || compare(c, *best) > 0) best = c;
  }
  return best ? best->realize() : ExpPolynomial();
}

ExpPolynomial dominated(std::span<const ExpPolynomial> fs) {
  std::optional<AsymptoticClass> best;
  for (const auto& f : fs) {
    auto c = leading_class(f, Sign::negative);
    if (!best || compare(c, *best) < 0) best = c;
  }
  return best ? best->realize() : ExpPolynomial();
}

ExpPolynomial dominating(std::initializer_list<ExpPolynomial> fs) {
  return dominating(std::span<const ExpPolynomial>(fs.begin(), fs.size()));
}

ExpPolynomial dominated(std::initializer_list<ExpPolynomial> fs) {
  return dominated(std::span<const ExpPolynomial>(fs.begin(), fs.size()));
}

bool is_O1(const ExpPolynomial& f) {
  auto c = leading_class(f);
  return c.sign == Sign::zero || c.base < 1 || (c.base == 1 && c.degree == 0);
}

bool is_Omega1(const ExpPolynomial& f) {
  auto c = leading_class(f);
  return c.sign != Sign::zero && c.base >= 1;
}

namespace {

struct Term {
  Rational magnitude;
  unsigned degree;
  Rational base;
};

Rational term_value(const Term& t, unsigned i) {
  return t.magnitude * power(Rational(i), t.degree) * power(t.base, i);
}

bool sign_for_all(const ExpPolynomial& f, bool strict) {
  if (f.is_symbolic()) return false;
  unsigned last_correction = f.corrections().empty() ? 0 : f.corrections().rbegin()->first + 1;
  auto check_prefix = [&](unsigned upto) {
    for (unsigned i = 0; i < upto; ++i) {
      int s = sgn(f.evaluate(i));
      if (s < 0 || (strict && s == 0)) return false;
    }
    return true;
  };
  if (f.terms().empty()) return !strict && check_prefix(last_correction);
  AsymptoticClass lead = leading_class(f);
  if (lead.sign != Sign::positive) return false;
  Term leader{f.terms().rbegin()->second.back().constant(), lead.degree, lead.base};
  std::vector<Term> negatives;
  for (const auto& [b, coeffs] : f.terms())
    for (unsigned j = 0; j < coeffs.size(); ++j)
      if (sgn(coeffs[j].constant()) < 0) negatives.push_back({-coeffs[j].constant(), j, b});

  auto holds_from = [&](unsigned K) {
    Rational total(0);
    for (const auto& t : negatives) {
      if (t.base < leader.base && t.degree > leader.degree) {
        unsigned delta = t.degree - leader.degree;
        if (power(Rational(K + 1), delta) * t.base > power(Rational(K), delta) * leader.base) return false;
      }
      total += term_value(t, K);
    }
    Rational lead_value = term_value(leader, K);
    return strict ? total < lead_value : total <= lead_value;
  };

  std::optional<unsigned> K;
  for (unsigned k = 1; k <= 4096; k = k < 64 ? k + 1 : k * 2) {
    if (holds_from(k)) {
      K = k;
      break;
    }
  }
  if (!K) return false;
  return check_prefix(std::max(*K, last_correction));
}

}  // namespace

bool nonnegative_for_all(const ExpPolynomial& f) { return sign_for_all(f, false); }

bool positive_for_all(const ExpPolynomial& f) { return sign_for_all(f, true); }

bool bounded_below_zero_for_all(const ExpPolynomial& f) {
  ExpPolynomial g = -f;
  auto lead = leading_class(g);
  return lead.sign == Sign::positive && lead.base >= 1 && positive_for_all(g);
}

}  // namespace probterm
