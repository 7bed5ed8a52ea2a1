#include "probterm/simulator.hpp"

#include <cmath>
#include <sstream>

namespace probterm {

void StepStatistics::add(double x) {
  ++count;
  double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
  min = std::min(min, x);
  max = std::max(max, x);
}

namespace {

// Exact rational with 64-bit parts; every operation reports overflow.
struct Small {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

bool reduce(__int128 n, __int128 d, Small& out) {
  if (d < 0) n = -n, d = -d;
  __int128 a = n < 0 ? -n : n, b = d;
  while (b) a %= b, std::swap(a, b);
  if (a > 1) n /= a, d /= a;
  if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX) return false;
  out.num = static_cast<std::int64_t>(n);
  out.den = static_cast<std::int64_t>(d);
  return true;
}

bool add(const Small& a, const Small& b, Small& out) {
  if (a.den == 1 && b.den == 1) {
    std::int64_t n;
    if (__builtin_add_overflow(a.num, b.num, &n)) return false;
    out = {n, 1};
    return true;
  }
  return reduce(__int128(a.num) * b.den + __int128(b.num) * a.den, __int128(a.den) * b.den, out);
}

bool multiply(const Small& a, const Small& b, Small& out) {
  if (a.den == 1 && b.den == 1) {
    std::int64_t n;
    if (__builtin_mul_overflow(a.num, b.num, &n)) return false;
    out = {n, 1};
    return true;
  }
  return reduce(__int128(a.num) * b.num, __int128(a.den) * b.den, out);
}

int signum(const Small& a) { return (a.num > 0) - (a.num < 0); }
double to_double(const Small& a) { return static_cast<double>(a.num) / static_cast<double>(a.den); }

bool convert(const Rational& r, Small& out) {
  if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) return false;
  out = {r.get_num().get_si(), r.get_den().get_si()};
  return true;
}

bool add(const Rational& a, const Rational& b, Rational& out) {
  out = a + b;
  return true;
}
bool multiply(const Rational& a, const Rational& b, Rational& out) {
  out = a * b;
  return true;
}
int signum(const Rational& a) { return sgn(a); }
double to_double(const Rational& a) { return a.get_d(); }
bool convert(const Rational& r, Rational& out) {
  out = r;
  return true;
}

template <typename Num>
class CompiledPolynomial {
 public:
  bool compile(const Polynomial& p) {
    for (const auto& [m, c] : p.terms()) {
      Term t;
      if (!convert(c, t.coefficient)) return false;
      for (std::size_t j = 0; j < m.width(); ++j)
        for (unsigned k = 0; k < m.exponent(j); ++k) t.factors.push_back(j);
      terms_.push_back(std::move(t));
    }
    return true;
  }

  bool evaluate(const std::vector<Num>& state, Num& out, Num& scratch) const {
    out = Num();
    for (const auto& t : terms_) {
      scratch = t.coefficient;
      for (std::size_t j : t.factors)
        if (!multiply(scratch, state[j], scratch)) return false;
      if (!add(out, scratch, out)) return false;
    }
    return true;
  }

 private:
  struct Term {
    Num coefficient;
    std::vector<std::size_t> factors;
  };
  std::vector<Term> terms_;
};

template <typename Num>
struct CompiledChoice {
  Num self_coefficient;
  bool has_self = false;
  CompiledPolynomial<Num> rest;
};

std::uint64_t threshold(const Rational& cumulative) {
  mpz_class scaled = cumulative.get_num();
  scaled <<= 64;
  scaled /= cumulative.get_den();
  if (scaled > mpz_class(std::numeric_limits<std::uint64_t>::max())) return std::numeric_limits<std::uint64_t>::max();
  mpz_class low = scaled & mpz_class(0xffffffffu);
  mpz_class high = scaled >> 32;
  return (static_cast<std::uint64_t>(high.get_ui()) << 32) | low.get_ui();
}

bool too_large(const Rational& x, unsigned max_bits) {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) > max_bits || mpz_sizeinbase(x.get_den_mpz_t(), 2) > max_bits;
}
bool too_large(const Small&, unsigned) { return false; }

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// SplitMix64 stream: draw k of run r is mix(key(seed, r) + k * golden gamma).
class RunGenerator {
 public:
  RunGenerator(std::uint64_t seed, std::size_t run) : state_(mix(mix(seed) + static_cast<std::uint64_t>(run))) {}
  std::uint64_t operator()() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

enum class Outcome { terminated, exhausted, diverged, overflow };

struct Thresholds {
  std::vector<std::vector<std::uint64_t>> per_update;  // choice k taken when draw < thresholds[k]
};

template <typename Num>
class Runner {
 public:
  bool compile(const ValidatedProgram& p, const std::vector<Polynomial>& tracked) {
    for (const auto& u : p.updates()) {
      auto& choices = updates_.emplace_back();
      for (const auto& c : u.choices) {
        auto& cc = choices.emplace_back();
        cc.has_self = sgn(c.self_coefficient) != 0;
        if (!convert(c.self_coefficient, cc.self_coefficient) || !cc.rest.compile(c.rest)) return false;
      }
    }
    for (const auto& v : p.initial_values()) {
      if (!convert(v, initial_.emplace_back())) return false;
    }
    if (!guard_.compile(p.guard())) return false;
    for (const auto& t : tracked)
      if (!tracked_.emplace_back().compile(t)) return false;
    return true;
  }

  // Tracked values of state i go to samples[i * tracked + k].
  Outcome run(RunGenerator& rng, const Thresholds& thresholds, const SimulationOptions& options,
              std::size_t recorded, std::vector<double>& samples, std::size_t& steps) {
    state_ = initial_;
    const std::size_t width = tracked_.size();
    for (std::size_t i = 0;; ++i) {
      steps = i;
      if (options.respect_guard) {
        if (!guard_.evaluate(state_, value_, scratch_)) return Outcome::overflow;
        if (signum(value_) <= 0) return Outcome::terminated;
      }
      if (i < recorded)
        for (std::size_t k = 0; k < width; ++k) {
          if (!tracked_[k].evaluate(state_, value_, scratch_)) return Outcome::overflow;
          samples[i * width + k] = to_double(value_);
        }
      if (i == options.max_steps) return Outcome::exhausted;
      bool diverged = false;
      for (std::size_t j = 0; j < updates_.size(); ++j) {
        const auto& choices = updates_[j];
        std::size_t k = 0;
        if (choices.size() > 1) {
          const auto& t = thresholds.per_update[j];
          std::uint64_t draw = rng();
          while (k + 1 < choices.size() && draw >= t[k]) ++k;
        }
        const auto& c = choices[k];
        if (!c.rest.evaluate(state_, fresh_, scratch_)) return Outcome::overflow;
        if (c.has_self) {
          if (!multiply(c.self_coefficient, state_[j], scratch_) || !add(fresh_, scratch_, fresh_))
            return Outcome::overflow;
        }
        std::swap(state_[j], fresh_);
        diverged |= too_large(state_[j], options.max_bits);
      }
      if (diverged) return Outcome::diverged;
    }
  }

 private:
  std::vector<std::vector<CompiledChoice<Num>>> updates_;
  std::vector<Num> initial_;
  CompiledPolynomial<Num> guard_;
  std::vector<CompiledPolynomial<Num>> tracked_;
  std::vector<Num> state_;
  Num value_, scratch_, fresh_;
};

}  // namespace

SimulationStats simulate(const ValidatedProgram& p, const SimulationOptions& options) {
  Thresholds thresholds;
  for (const auto& u : p.updates()) {
    auto& t = thresholds.per_update.emplace_back();
    Rational cumulative(0);
    for (std::size_t k = 0; k < u.choices.size(); ++k) {
      cumulative += u.choices[k].probability;
      t.push_back(k + 1 == u.choices.size() ? std::numeric_limits<std::uint64_t>::max() : threshold(cumulative));
    }
  }
  Runner<Small> fast;
  bool fast_ok = fast.compile(p, options.tracked);
  Runner<Rational> exact;
  exact.compile(p, options.tracked);

  SimulationStats stats;
  stats.runs = options.runs;
  stats.max_steps = options.max_steps;
  stats.seed = options.seed;
  const std::size_t width = options.tracked.size();
  const std::size_t recorded = width ? std::min(options.record_steps, options.max_steps) + 1 : 0;
  stats.per_step.assign(width, std::vector<StepStatistics>(recorded));

  std::vector<double> samples(recorded * width);
  double total_steps = 0;
  for (std::size_t run = 0; run < options.runs; ++run) {
    std::size_t steps = 0;
    Outcome outcome = Outcome::overflow;
    if (fast_ok) {
      RunGenerator rng(options.seed, run);
      outcome = fast.run(rng, thresholds, options, recorded, samples, steps);
    }
    if (outcome == Outcome::overflow) {
      RunGenerator rng(options.seed, run);
      outcome = exact.run(rng, thresholds, options, recorded, samples, steps);
    }
    if (outcome == Outcome::terminated) {
      ++stats.terminated;
      total_steps += static_cast<double>(steps);
    } else if (outcome == Outcome::diverged) {
      ++stats.diverged;
    }
    // A diverged run is recorded up to its last completed state.
    std::size_t last = outcome == Outcome::terminated ? steps : steps + 1;
    for (std::size_t i = 0; i < std::min(last, recorded); ++i)
      for (std::size_t k = 0; k < width; ++k) stats.per_step[k][i].add(samples[i * width + k]);
  }
  stats.termination_fraction = Rational(static_cast<unsigned long>(stats.terminated),
                                        static_cast<unsigned long>(std::max<std::size_t>(options.runs, 1)));
  stats.termination_fraction.canonicalize();
  stats.mean_steps_among_terminated = stats.terminated ? total_steps / static_cast<double>(stats.terminated) : 0.0;
  return stats;
}

std::string to_csv(const SimulationStats& stats, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out.precision(17);
  out << "expression,i,count,mean,variance,min,max\n";
  for (std::size_t k = 0; k < stats.per_step.size(); ++k) {
    for (std::size_t i = 0; i < stats.per_step[k].size(); ++i) {
      const auto& s = stats.per_step[k][i];
      if (s.count == 0) break;
      out << '"' << (k < labels.size() ? labels[k] : "expr" + std::to_string(k)) << "\"," << i << ',' << s.count << ','
          << s.mean << ',' << s.variance() << ',' << s.min << ',' << s.max << '\n';
    }
  }
  return out.str();
}

BoundCheckReport empirical_bound_check(const ValidatedProgram& p, const Monomial& m, const BoundingFunctions& bounds,
                                       std::size_t runs, std::size_t i_begin, std::size_t i_end,
                                       std::uint64_t seed) {
  SimulationOptions options;
  options.runs = runs;
  options.max_steps = i_end;
  options.seed = seed;
  options.tracked = {Polynomial::term(m, Rational(1))};
  SimulationStats stats = simulate(p, options);
  const auto& steps = stats.per_step[0];

  BoundCheckReport report;
  if (i_begin >= steps.size() || steps[i_begin].count == 0) return report;
  report.surviving_runs = steps[i_begin].count;
  auto value = [](const ExpPolynomial& f, std::size_t i) { return f.evaluate(static_cast<unsigned>(i)).get_d(); };

  const double l0 = value(bounds.lower, i_begin), u0 = value(bounds.upper, i_begin);
  const double min0 = steps[i_begin].min, max0 = steps[i_begin].max;
  if (l0 > 0) {
    report.alpha = min0 > 0 ? min0 / (2 * l0) : 1;
  } else if (l0 < 0) {
    report.alpha = 2 * std::max(min0 / l0, 1.0);
  }
  if (u0 > 0) {
    report.beta = 2 * std::max(max0 / u0, 1.0);
  } else if (u0 < 0) {
    report.beta = max0 < 0 ? max0 / (2 * u0) : 1;
  }
  auto slack = [](double x) { return 1e-9 * std::max(1.0, std::fabs(x)); };
  for (std::size_t i = i_begin; i <= i_end && i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (s.count == 0) break;
    double lo = report.alpha * value(bounds.lower, i);
    double hi = report.beta * value(bounds.upper, i);
    if (lo > s.min + slack(lo)) report.violations.push_back({i, true, s.min, lo});
    if (hi < s.max - slack(hi)) report.violations.push_back({i, false, s.max, hi});
  }
  return report;
}

}  // namespace probterm
