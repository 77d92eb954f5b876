#include "espm/pso.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "espm/errors.hpp"
#include "espm/parallel.hpp"

namespace espm {

namespace {

// 53 random bits mapped to [0, 1); independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check(const PsoProblem& problem, const PsoConfig& config) {
  if (!problem.objective) throw Error("PSO objective is empty");
  const auto d = problem.lower.size();
  if (d == 0 || problem.upper.size() != d) throw Error("PSO bounds must be nonempty and of equal length");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(problem.lower[i] <= problem.upper[i]) || !std::isfinite(problem.lower[i]) || !std::isfinite(problem.upper[i])) {
      throw Error("PSO bound " + std::to_string(i) + " is invalid");
    }
  }
  if (problem.initial_guess) {
    const Vector& g = *problem.initial_guess;
    if (g.size() != d) throw Error("PSO initial guess has the wrong dimension");
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(g[i] >= problem.lower[i] && g[i] <= problem.upper[i])) throw Error("PSO initial guess outside bounds");
    }
  }
  if (config.swarm_size < 1) throw Error("PSO swarm size must be at least 1");
  if (config.iterations < 0) throw Error("PSO iteration count must be nonnegative");
  if (!(config.inertia >= 0.0 && config.cognitive >= 0.0 && config.social >= 0.0)) {
    throw Error("PSO coefficients must be nonnegative");
  }
}

}  // namespace

PsoResult pso_minimize(const PsoProblem& problem, const PsoConfig& config) {
  check(problem, config);
  const Eigen::Index d = problem.lower.size();
  const int n = config.swarm_size;
  const Vector span = problem.upper - problem.lower;

  std::mt19937_64 rng(config.seed);
  std::vector<Vector> u(n, Vector::Zero(d));
  std::vector<Vector> v(n, Vector::Zero(d));
  for (int k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      u[k][i] = uniform01(rng);
      v[k][i] = uniform01(rng) - uniform01(rng);
    }
  }
  if (problem.initial_guess) {
    for (Eigen::Index i = 0; i < d; ++i) {
      u[0][i] = span[i] > 0.0 ? ((*problem.initial_guess)[i] - problem.lower[i]) / span[i] : 0.0;
    }
  }

  const Vector u0_guess = u[0];
  auto to_physical = [&](const Vector& x) -> Vector { return problem.lower + span.cwiseProduct(x); };

  PsoResult result;
  std::vector<double> cost(n);
  auto evaluate_all = [&] {
    parallel_for(static_cast<std::size_t>(n), config.jobs, [&](std::size_t k) {
      const double c = problem.objective(to_physical(u[k]));
      cost[k] = std::isnan(c) ? std::numeric_limits<double>::infinity() : c;
    });
    result.evaluations += n;
    for (int k = 0; k < n; ++k) {
      if (!(cost[k] < config.failure_threshold)) ++result.failed_evaluations;
    }
  };

  evaluate_all();
  std::vector<Vector> pbest = u;
  std::vector<double> pbest_cost = cost;
  int g = 0;
  for (int k = 1; k < n; ++k) {
    if (cost[k] < pbest_cost[g]) g = k;
  }
  Vector gbest = pbest[g];
  double gbest_cost = pbest_cost[g];
  result.history.push_back(gbest_cost);

  for (int it = 0; it < config.iterations; ++it) {
    for (int k = 0; k < n; ++k) {
      for (Eigen::Index i = 0; i < d; ++i) {
        const double r1 = uniform01(rng);
        const double r2 = uniform01(rng);
        double vel = config.inertia * v[k][i] + config.cognitive * r1 * (pbest[k][i] - u[k][i]) +
                     config.social * r2 * (gbest[i] - u[k][i]);
        double pos = u[k][i] + vel;
        if (pos < 0.0) {
          pos = 0.0;
          vel = 0.0;
        } else if (pos > 1.0) {
          pos = 1.0;
          vel = 0.0;
        }
        u[k][i] = pos;
        v[k][i] = vel;
      }
    }
    evaluate_all();
    for (int k = 0; k < n; ++k) {
      if (cost[k] < pbest_cost[k]) {
        pbest_cost[k] = cost[k];
        pbest[k] = u[k];
      }
      if (pbest_cost[k] < gbest_cost) {
        gbest_cost = pbest_cost[k];
        gbest = pbest[k];
      }
    }
    result.history.push_back(gbest_cost);
  }

  result.best = to_physical(gbest);
  if (problem.initial_guess && gbest == u0_guess) {
    // The swarm never improved on the guess; return it bit-exact.
    result.best = *problem.initial_guess;
  }
  result.best = result.best.cwiseMax(problem.lower).cwiseMin(problem.upper);
  result.best_cost = gbest_cost;
  result.success = gbest_cost < config.failure_threshold;
  if (!result.success) {
    std::ostringstream msg;
    msg << "all " << result.evaluations << " evaluations failed (cost >= " << config.failure_threshold
        << "); best cost " << gbest_cost;
    result.diagnostics = msg.str();
  }
  return result;
}

}  // namespace espm
