#include "fluxon/optimize/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <spdlog/spdlog.h>
#include <sstream>
#include <thread>

#include "fluxon/core/error.hpp"
#include "fluxon/core/event_log.hpp"

namespace fluxon::optimize {

void PsoConfig::validate() const {
  if (n_particles < 2) throw InputError("PSO needs at least 2 particles");
  if (n_iterations < 1) throw InputError("PSO needs at least 1 iteration");
  if (bounds.empty()) throw InputError("PSO bounds are empty");
  for (const auto& b : bounds) {
    if (!std::isfinite(b.low) || !std::isfinite(b.high) || !(b.low < b.high)) {
      throw InputError("PSO bounds must be finite with low < high");
    }
  }
  if (!(velocity_clamp > 0.0)) throw InputError("PSO velocity clamp must be positive");
  if (jobs < 1) throw InputError("jobs must be >= 1");
}

namespace {

using Vec = std::vector<double>;

void evaluate_all(const Objective& obj, const std::vector<Vec>& xs, std::vector<double>& scores,
                  int jobs) {
  auto run = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < xs.size(); i += stride) scores[i] = obj.evaluate(xs[i]);
  };
  auto n_threads = static_cast<std::size_t>(std::min<int>(jobs, static_cast<int>(xs.size())));
  if (n_threads <= 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(run, t, n_threads);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) {
      spdlog::warn("objective returned NaN for particle {}; treating as +inf", i);
      scores[i] = std::numeric_limits<double>::infinity();
    }
  }
}

// Reflects x back inside [lo, hi], flipping the velocity.
void reflect(double& x, double& v, double lo, double hi) {
  if (x > hi) {
    x = hi - (x - hi);
    v = -v;
  } else if (x < lo) {
    x = lo + (lo - x);
    v = -v;
  }
  x = std::clamp(x, lo, hi);
}

}  // namespace

PsoResult pso_minimize(const Objective& objective, const PsoConfig& cfg) {
  cfg.validate();
  if (!objective.evaluate) throw InputError("PSO objective has no evaluator");
  const std::size_t dim = cfg.bounds.size();
  const auto n = static_cast<std::size_t>(cfg.n_particles);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Vec vmax(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    vmax[d] = cfg.velocity_clamp * (cfg.bounds[d].high - cfg.bounds[d].low);
  }
  std::vector<Vec> x(n, Vec(dim)), v(n, Vec(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      const auto& b = cfg.bounds[d];
      x[i][d] = b.low + unit(rng) * (b.high - b.low);
      v[i][d] = (2.0 * unit(rng) - 1.0) * vmax[d];
    }
  }

  std::vector<double> score(n);
  evaluate_all(objective, x, score, cfg.jobs);
  std::vector<Vec> pbest = x;
  std::vector<double> pbest_score = score;
  std::size_t g = static_cast<std::size_t>(std::min_element(score.begin(), score.end()) - score.begin());
  PsoResult result{x[g], score[g], {}};

  auto record = [&](int iteration) {
    double finite_sum = 0.0;
    std::size_t finite = 0;
    for (double s : score) {
      if (std::isfinite(s)) {
        finite_sum += s;
        ++finite;
      }
    }
    double mean = finite == 0 ? std::numeric_limits<double>::infinity() : finite_sum / finite;
    result.trace.push_back({iteration, result.best_score, mean});
  };
  record(0);

  for (int it = 1; it < cfg.n_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        double r1 = unit(rng);
        double r2 = unit(rng);
        double vel = cfg.inertia * v[i][d] + cfg.c1 * r1 * (pbest[i][d] - x[i][d]) +
                     cfg.c2 * r2 * (result.best[d] - x[i][d]);
        vel = std::clamp(vel, -vmax[d], vmax[d]);
        double pos = x[i][d] + vel;
        reflect(pos, vel, cfg.bounds[d].low, cfg.bounds[d].high);
        x[i][d] = pos;
        v[i][d] = vel;
      }
    }
    evaluate_all(objective, x, score, cfg.jobs);
    for (std::size_t i = 0; i < n; ++i) {
      if (score[i] < pbest_score[i]) {
        pbest_score[i] = score[i];
        pbest[i] = x[i];
      }
      if (score[i] < result.best_score) {
        result.best_score = score[i];
        result.best = x[i];
      }
    }
    record(it);
  }
  return result;
}

std::string format_trace_csv(std::span<const PsoTraceRow> trace) {
  std::ostringstream os;
  os << "iteration,best_score,mean_score\n";
  for (const auto& r : trace) {
    os << r.iteration << ',' << format_number(r.best_score) << ',' << format_number(r.mean_score) << '\n';
  }
  return os.str();
}

}  // namespace fluxon::optimize
