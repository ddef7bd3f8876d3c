#include <doctest.h>

#include <cmath>
#include <limits>

#include "fluxon/circuit/parser.hpp"
#include "fluxon/core/error.hpp"
#include "fluxon/optimize/margin_objective.hpp"
#include "fluxon/optimize/pso.hpp"
#include "test_support.hpp"

using namespace fluxon;
using namespace fluxon::optimize;

namespace {

Objective sphere() {
  return {[](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return s;
          },
          "sphere"};
}

Objective rosenbrock() {
  return {[](std::span<const double> x) {
            return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
          },
          "rosenbrock"};
}

PsoConfig box(int dim, double b, int particles, int iterations, std::uint64_t seed = 1) {
  PsoConfig cfg;
  cfg.bounds.assign(static_cast<std::size_t>(dim), {-b, b});
  cfg.n_particles = particles;
  cfg.n_iterations = iterations;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("sphere minimum") {
  auto r = pso_minimize(sphere(), box(5, 10, 30, 200));
  CHECK(r.best_score < 1e-6);
  CHECK(r.best.size() == 5);
  CHECK(r.trace.size() == 200);
  CHECK(r.trace.front().iteration == 0);
}

TEST_CASE("rosenbrock valley") {
  auto r = pso_minimize(rosenbrock(), box(2, 5, 40, 400, 3));
  CHECK(std::abs(r.best[0] - 1.0) < 1e-2);
  CHECK(std::abs(r.best[1] - 1.0) < 1e-2);
}

TEST_CASE("trace is monotone and the result is within bounds") {
  auto r = pso_minimize(rosenbrock(), box(2, 5, 10, 50, 9));
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].best_score <= r.trace[i - 1].best_score);
  CHECK(r.best_score == r.trace.back().best_score);
  for (double v : r.best) CHECK(std::abs(v) <= 5.0);
  CHECK(rosenbrock().evaluate(r.best) == r.best_score);
}

TEST_CASE("a single iteration keeps the best initial particle") {
  auto r = pso_minimize(sphere(), box(3, 4, 12, 1, 5));
  REQUIRE(r.trace.size() == 1);
  CHECK(r.best_score == r.trace[0].best_score);
  CHECK(r.trace[0].mean_score >= r.best_score);
  CHECK(sphere().evaluate(r.best) == r.best_score);
}

TEST_CASE("seeded runs are reproducible and threads do not change them") {
  auto a = pso_minimize(rosenbrock(), box(2, 5, 16, 30, 4));
  auto b = pso_minimize(rosenbrock(), box(2, 5, 16, 30, 4));
  auto cfg = box(2, 5, 16, 30, 4);
  cfg.jobs = 4;
  auto c = pso_minimize(rosenbrock(), cfg);
  CHECK(a.best == b.best);
  CHECK(a.best == c.best);
  CHECK(a.best_score == c.best_score);
  auto d = pso_minimize(rosenbrock(), box(2, 5, 16, 30, 5));
  CHECK(d.best != a.best);
}

TEST_CASE("nan scores are treated as infinite") {
  Objective half_nan{[](std::span<const double> x) {
                       return x[0] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : x[0];
                     },
                     "half"};
  auto r = pso_minimize(half_nan, box(1, 1, 10, 30, 2));
  CHECK(std::isfinite(r.best_score));
  CHECK(r.best[0] >= 0.0);
}

TEST_CASE("pso configuration errors") {
  CHECK_THROWS_AS(pso_minimize(sphere(), box(2, 1, 1, 10)), InputError);
  CHECK_THROWS_AS(pso_minimize(sphere(), box(2, 1, 5, 0)), InputError);
  auto cfg = box(2, 1, 5, 5);
  cfg.bounds[0] = {1.0, -1.0};
  CHECK_THROWS_AS(pso_minimize(sphere(), cfg), InputError);
  CHECK_THROWS_AS(pso_minimize(Objective{}, box(2, 1, 5, 5)), InputError);
}

TEST_CASE("trace csv") {
  std::vector<PsoTraceRow> rows{{0, 2.5, 3.0}, {1, 1.0, 2.0}};
  auto csv = format_trace_csv(rows);
  CHECK(csv.rfind("iteration,best_score,mean_score\n", 0) == 0);
  CHECK(csv.find("1,1,2") != std::string::npos);
}

TEST_CASE("margin objective on the two-pulse soma") {
  auto net = circuit::load_netlist(test::netlist_path("soma2.cir"));
  auto pass = circuit::parse_pass_test("pulses(b4)==1");
  MarginObjectiveConfig cfg;
  cfg.selectors = {"iba.amp", "ibd.amp"};
  cfg.margin.step_ps = 0.1;
  cfg.margin.stop_ps = 150.0;
  auto obj = margin_objective(net, pass, cfg);

  std::vector<double> nominal{net.get("iba.amp"), net.get("ibd.amp")};
  double score = obj.evaluate(nominal);
  double expected = 0.0;
  for (const auto& s : cfg.selectors) {
    auto m = circuit::margin_scan(net, s, pass, cfg.margin);
    expected -= std::min(m.low, m.high);
  }
  CHECK(score == doctest::Approx(expected));
  CHECK(score < 0.0);

  // starving the decision junction leaves no output pulse
  CHECK(obj.evaluate(std::vector<double>{nominal[0], 1e-6}) == kNominalFailPenalty);

  auto moved = substitute(net, cfg.selectors, std::vector<double>{1e-4, 2e-4});
  CHECK(moved.get("iba.amp") == 1e-4);
  CHECK(moved.get("ibd.amp") == 2e-4);

  cfg.selectors = {"nosuch.amp"};
  CHECK_THROWS_AS(margin_objective(net, pass, cfg), InputError);
}

TEST_CASE("margin swarm improves on its first population") {
  auto net = circuit::load_netlist(test::netlist_path("soma2.cir"));
  auto pass = circuit::parse_pass_test("pulses(b4)==1");
  MarginObjectiveConfig mcfg;
  mcfg.selectors = {"iba.amp", "ibd.amp"};
  mcfg.margin.step_ps = 0.1;
  mcfg.margin.stop_ps = 150.0;
  mcfg.margin.resolution = 0.02;
  PsoConfig cfg;
  cfg.bounds = {{150e-6, 300e-6}, {100e-6, 200e-6}};
  cfg.n_particles = 4;
  cfg.n_iterations = 6;
  auto r = pso_minimize(margin_objective(net, pass, mcfg), cfg);
  CHECK(r.best_score < 0.0);
  CHECK(r.best_score <= r.trace.front().best_score);
}
