#pragma once

#include "probterm/program.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

using probterm::Rational;

inline std::filesystem::path corpus_dir() { return PROBTERM_CORPUS_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline probterm::ValidatedProgram load(const std::filesystem::path& path) {
  return probterm::validate(probterm::parse_program(read_file(path)));
}

inline probterm::ValidatedProgram reference(const std::string& name) {
  return load(corpus_dir() / "reference" / (name + ".prob"));
}

inline probterm::ValidatedProgram from_source(std::string_view source) {
  return probterm::validate(probterm::parse_program(source));
}

// Every Prob-solvable corpus program, reference and bench.
inline std::vector<std::pair<std::string, probterm::ValidatedProgram>> valid_corpus() {
  std::vector<std::filesystem::path> paths;
  for (const char* sub : {"reference", "bench"})
    for (const auto& e : std::filesystem::directory_iterator(corpus_dir() / sub))
      if (e.path().extension() == ".prob") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::vector<std::pair<std::string, probterm::ValidatedProgram>> out;
  for (const auto& path : paths) {
    try {
      out.emplace_back(path.stem().string(), load(path));
    } catch (const probterm::NotProbSolvable&) {
    }
  }
  return out;
}

using State = std::vector<Rational>;
using StateDistribution = std::map<State, Rational>;

// Exact distribution of the state after `steps` guard-free iterations, by
// enumerating every path through the update choices.
inline StateDistribution enumerate_states(const probterm::ValidatedProgram& p, unsigned steps) {
  StateDistribution current{{p.initial_values(), Rational(1)}};
  for (unsigned s = 0; s < steps; ++s) {
    for (const auto& update : p.updates()) {
      StateDistribution next;
      for (const auto& [state, prob] : current) {
        for (const auto& choice : update.choices) {
          State updated = state;
          updated[update.variable] =
              choice.self_coefficient * state[update.variable] + probterm::evaluate(choice.rest, state);
          next[updated] += prob * choice.probability;
        }
      }
      current = std::move(next);
    }
  }
  return current;
}

// Distinct states reachable in `steps` iterations along paths whose guard
// held before every iteration, capped at `cap` states per layer.
inline std::set<State> surviving_states(const probterm::ValidatedProgram& p, unsigned steps, std::size_t cap = 5000) {
  std::set<State> current{p.initial_values()};
  for (unsigned s = 0; s < steps && !current.empty(); ++s) {
    std::set<State> next;
    for (const auto& state : current) {
      if (sgn(probterm::evaluate(p.guard(), state)) <= 0) continue;
      std::vector<State> partial{state};
      for (const auto& update : p.updates()) {
        std::vector<State> expanded;
        for (const auto& st : partial)
          for (const auto& choice : update.choices) {
            State updated = st;
            updated[update.variable] =
                choice.self_coefficient * st[update.variable] + probterm::evaluate(choice.rest, st);
            expanded.push_back(std::move(updated));
          }
        partial = std::move(expanded);
      }
      for (auto& st : partial)
        if (next.size() < cap) next.insert(std::move(st));
    }
    current = std::move(next);
  }
  return current;
}

inline Rational expectation(const StateDistribution& d, const probterm::Polynomial& f) {
  Rational sum = 0;
  for (const auto& [state, prob] : d) sum += prob * probterm::evaluate(f, state);
  return sum;
}

// Source text of a small random Prob-solvable loop.
inline std::string random_program(std::mt19937_64& rng, std::size_t max_vars = 3) {
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto rational = [&](int lo, int hi) {
    int num = pick(lo, hi), den = pick(1, 3);
    Rational r(num, den);
    r.canonicalize();
    return probterm::to_string(r);
  };
  const std::vector<std::string> names{"x", "y", "z", "w"};
  std::size_t n = static_cast<std::size_t>(pick(1, static_cast<int>(max_vars)));
  std::ostringstream out;
  for (std::size_t j = 0; j < n; ++j) out << names[j] << " := " << pick(-3, 5) << "\n";

  auto monomial_over = [&](std::size_t upto) {
    std::string m;
    for (std::size_t k = 0; k < upto; ++k) {
      int e = pick(0, 2);
      if (e == 0) continue;
      if (!m.empty()) m += "*";
      m += names[k] + (e > 1 ? "^" + std::to_string(e) : "");
    }
    return m;
  };
  std::string guard;
  for (int t = pick(1, 2); t > 0; --t) {
    std::string m = monomial_over(n);
    if (m.empty()) m = names[0];
    guard += (guard.empty() ? "" : " + ") + rational(1, 3) + "*" + m;
  }
  out << "while " << guard << (pick(0, 1) ? " > " : " < ") << pick(-5, 20) << ":\n";
  for (std::size_t j = 0; j < n; ++j) {
    int branches = pick(1, 3);
    std::vector<int> weights;
    int total = 0;
    for (int b = 0; b < branches; ++b) total += weights.emplace_back(pick(1, 4));
    out << "  " << names[j] << " = ";
    for (int b = 0; b < branches; ++b) {
      std::string expr = rational(0, 2) + "*" + names[j];
      std::string m = monomial_over(j);
      if (!m.empty()) expr += " + " + rational(-2, 2) + "*" + m;
      expr += " + " + rational(-3, 3);
      out << expr;
      if (branches > 1) {
        if (b + 1 < branches) out << " @ " << weights[b] << "/" << total << "; ";
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace testing
