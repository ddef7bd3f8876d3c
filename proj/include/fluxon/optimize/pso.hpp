#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fluxon::optimize {

/// Deterministic scalar objective; lower is better. Must be safe to call
/// concurrently when PsoConfig::jobs > 1.
struct Objective {
  std::function<double(std::span<const double>)> evaluate;
  std::string description;
};

struct Bounds {
  double low = 0.0;
  double high = 0.0;
};

struct PsoConfig {
  int n_particles = 30;
  /// Evaluation rounds including the initial population (iteration 0).
  int n_iterations = 200;
  double inertia = 0.72;
  double c1 = 1.49;
  double c2 = 1.49;
  double velocity_clamp = 0.2;  ///< fraction of each dimension's range
  std::vector<Bounds> bounds;
  std::uint64_t seed = 1;
  int jobs = 1;

  void validate() const;
};

struct PsoTraceRow {
  int iteration = 0;
  double best_score = 0.0;
  double mean_score = 0.0;
};

struct PsoResult {
  std::vector<double> best;
  double best_score = 0.0;
  std::vector<PsoTraceRow> trace;
};

/// Particle swarm minimization with inertia-weight velocity updates and
/// reflection at the bounds. NaN scores count as +inf (logged).
PsoResult pso_minimize(const Objective& objective, const PsoConfig& cfg);

/// `iteration,best_score,mean_score` CSV.
std::string format_trace_csv(std::span<const PsoTraceRow> trace);

}  // namespace fluxon::optimize
