#pragma once

#include "probterm/bounds.hpp"
#include "probterm/program.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace probterm {

struct StepStatistics {
  std::size_t count = 0;
  double mean = 0;
  double m2 = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  void add(double x);
};

struct SimulationOptions {
  std::size_t runs = 1000;
  std::size_t max_steps = 1000;
  std::uint64_t seed = 42;
  std::vector<Polynomial> tracked;
  // Statistics are kept for states 0..record_steps (capped at max_steps).
  std::size_t record_steps = std::numeric_limits<std::size_t>::max();
  bool respect_guard = true;
  unsigned max_bits = 256;
};

struct SimulationStats {
  std::size_t runs = 0;
  std::size_t max_steps = 0;
  std::uint64_t seed = 0;
  std::size_t terminated = 0;
  std::size_t diverged = 0;
  Rational termination_fraction;
  double mean_steps_among_terminated = 0;
  // per_step[k][i]: tracked expression k at state i over runs whose guard
  // held in every state up to i.
  std::vector<std::vector<StepStatistics>> per_step;
};

SimulationStats simulate(const ValidatedProgram& p, const SimulationOptions& options);

// One column per tracked expression: i, count, mean, variance, min, max.
std::string to_csv(const SimulationStats& stats, const std::vector<std::string>& labels);

struct BoundViolation {
  std::size_t i;
  bool lower;
  double sample;
  double bound;
};

struct BoundCheckReport {
  double alpha = 1;
  double beta = 1;
  std::size_t surviving_runs = 0;
  std::vector<BoundViolation> violations;
};

BoundCheckReport empirical_bound_check(const ValidatedProgram& p, const Monomial& m, const BoundingFunctions& bounds,
                                       std::size_t runs, std::size_t i_begin, std::size_t i_end,
                                       std::uint64_t seed = 42);

}  // namespace probterm
