#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "espm/types.hpp"

namespace espm {

enum class BoundHandling { ClampZeroVelocity };

/// Global-best PSO with inertia weight. Particles move in the unit cube that
/// maps affinely onto [lower, upper].
struct PsoConfig {
  int swarm_size = 30;
  int iterations = 150;
  double inertia = 0.729;
  double cognitive = 1.494;
  double social = 1.494;
  std::uint64_t seed = 42;
  BoundHandling bounds = BoundHandling::ClampZeroVelocity;
  unsigned jobs = 1;
  // Costs at or above this are treated as failed evaluations.
  double failure_threshold = 1e3;
};

using Objective = std::function<double(const Vector&)>;

struct PsoProblem {
  Objective objective;
  Vector lower;
  Vector upper;
  std::optional<Vector> initial_guess;  // becomes particle 0
};

struct PsoResult {
  Vector best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> history;  // best-so-far after initialization and each iteration
  long evaluations = 0;
  long failed_evaluations = 0;
  bool success = false;
  std::string diagnostics;
};

/// Throws Error on malformed bounds or config. The trajectory depends only on
/// (problem, seed): random numbers are drawn serially and the global best is
/// updated in particle order regardless of `jobs`.
PsoResult pso_minimize(const PsoProblem& problem, const PsoConfig& config);

}  // namespace espm
