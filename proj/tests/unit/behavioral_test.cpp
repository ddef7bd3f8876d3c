#include <doctest.h>

#include <cmath>
#include <random>

#include "fluxon/behavioral/axon.hpp"
#include "fluxon/behavioral/soma.hpp"
#include "fluxon/behavioral/synapse.hpp"
#include "fluxon/core/error.hpp"

using namespace fluxon;
using namespace fluxon::behavioral;

namespace {

SpikeTrain periodic(int k, double spacing, double start = 0.0) {
  std::vector<double> t;
  for (int i = 0; i < k; ++i) t.push_back(start + i * spacing);
  return SpikeTrain("in", t);
}

// Left fold of soma_step, kept separate from soma_fire_times.
std::vector<double> fold_steps(const SomaParams& p, const SpikeTrain& in) {
  SomaState s;
  std::vector<double> fired;
  for (double t : in.times()) {
    auto r = soma_step(p, s, t);
    s = r.state;
    if (r.fired) fired.push_back(t + p.out_delay_ps);
  }
  return fired;
}

}  // namespace

TEST_CASE("threshold calibration") {
  CHECK(calibrate_threshold(1, 65, 25) == 1.0);
  CHECK(calibrate_threshold(1, 3, 100) == 1.0);
  CHECK(calibrate_threshold(2, 65, 25) == doctest::Approx(1.0742735782143339));
  CHECK(calibrate_threshold(3, 20, 25) == doctest::Approx(1.6512394));
}

TEST_CASE("two-pulse soma window") {
  auto p = SomaParams::calibrated(2, 65);
  auto fired = soma_fire_times(p, SpikeTrain("in", {0, 65}));
  REQUIRE(fired.size() == 1);
  CHECK(fired[0] == 65.0);
  CHECK(soma_fire_times(p, SpikeTrain("in", {0, 80})).empty());
  CHECK(soma_fire_times(p, SpikeTrain("in", {0, 66})).empty());

  auto burst = soma_fire_times(p, periodic(6, 20));
  CHECK(burst.times() == std::vector<double>{20, 60, 100});
}

TEST_CASE("three-pulse soma window") {
  auto p = SomaParams::calibrated(3, 20);
  CHECK(soma_fire_times(p, SpikeTrain("in", {0, 20, 40})).size() == 1);
  CHECK(soma_fire_times(p, SpikeTrain("in", {0, 30, 60})).empty());
  CHECK(soma_fire_times(p, SpikeTrain("in")).empty());
}

TEST_CASE("output delay and node name") {
  auto p = SomaParams::calibrated(2, 65, 25, 7.5);
  auto out = soma_fire_times(p, SpikeTrain("in", {0, 10}), "soma");
  CHECK(out.node() == "soma");
  CHECK(out.times() == std::vector<double>{17.5});
}

TEST_CASE("soma step rejects out-of-order pulses and resets on firing") {
  auto p = SomaParams::calibrated(2, 65);
  auto a = soma_step(p, {}, 10.0);
  CHECK_FALSE(a.fired);
  CHECK(a.state.level == doctest::Approx(1.0));
  CHECK_THROWS_AS(soma_step(p, a.state, 5.0), InputError);
  auto b = soma_step(p, a.state, 20.0);
  CHECK(b.fired);
  CHECK(b.state.level == 0.0);
}

TEST_CASE("soma params validation") {
  CHECK_THROWS_AS(SomaParams::calibrated(0, 65).validate(), InputError);
  CHECK_THROWS_AS(SomaParams::calibrated(7, 65).validate(), InputError);
  SomaParams bad = SomaParams::calibrated(2, 65);
  bad.tau_ps = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = SomaParams::calibrated(2, 65);
  bad.v_th = 2.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("threshold boundary sweep") {
  for (int n = 1; n <= 6; ++n) {
    for (double tau = 10; tau <= 100; tau += 10) {
      for (double t_max : {20.0, 40.0, 65.0}) {
        auto p = SomaParams::calibrated(n, t_max, tau);
        CAPTURE(n);
        CAPTURE(tau);
        CHECK(soma_fire_times(p, periodic(n, t_max)).size() == 1);
        // a single pulse reaches v_th = 1 whatever the spacing
        if (n >= 2) CHECK(soma_fire_times(p, periodic(n, 1.01 * t_max)).empty());
      }
    }
  }
}

TEST_CASE("count monotonicity and burst arithmetic") {
  for (int n = 1; n <= 6; ++n) {
    for (double tau : {10.0, 25.0, 60.0}) {
      for (double t_max : {20.0, 65.0}) {
        auto p = SomaParams::calibrated(n, t_max, tau);
        for (double spacing : {0.25 * t_max, 0.5 * t_max, t_max}) {
          CAPTURE(n);
          CAPTURE(tau);
          CAPTURE(spacing);
          // burst arithmetic needs n-1 pulses to stay clearly below v_th
          // (firing compares with a 1e-12 relative tolerance)
          bool below = n == 1 || calibrate_threshold(n - 1, spacing, tau) < p.v_th * (1.0 - 1e-9);
          std::size_t previous = 0;
          for (int k = 1; k <= 20; ++k) {
            auto fired = soma_fire_times(p, periodic(k, spacing)).size();
            CHECK(fired >= previous);
            previous = fired;
            if (below) CHECK(fired == static_cast<std::size_t>(k / n));
          }
        }
      }
    }
  }
}

TEST_CASE("fire times equal the fold of soma_step") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(0.0, 500.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> times(rng() % 30);
    for (auto& v : times) v = t(rng);
    SpikeTrain in("in", times);
    auto p = SomaParams::calibrated(1 + static_cast<int>(rng() % 6), 20.0 + rng() % 50, 25.0, 3.0);
    CHECK(soma_fire_times(p, in).times() == fold_steps(p, in));
  }
}

TEST_CASE("default soma per threshold") {
  auto two = soma_for_threshold(2);
  CHECK(two.n_threshold == 2);
  CHECK(two.t_max_ps == 65.0);
  auto five = soma_for_threshold(5);
  CHECK(five.t_max_ps == 20.0);
  CHECK(soma_fire_times(five, periodic(5, 20)).size() == 1);
  CHECK(soma_fire_times(five, periodic(4, 20)).empty());
}

TEST_CASE("msoma bank selection") {
  std::vector<SomaParams> bank{soma_for_threshold(1), soma_for_threshold(2), soma_for_threshold(5)};
  CHECK(msoma_select(bank, 1).n_threshold == 2);
  CHECK_THROWS_AS(msoma_select(bank, 3), InputError);
  std::vector<SomaParams> one{soma_for_threshold(5)};
  CHECK(msoma_select(one, 0).n_threshold == 5);
}

TEST_CASE("synapse contributions") {
  CHECK(synapse_contribution({SynapseKind::SM4, 2}, 2) == 4);
  CHECK(synapse_contribution({SynapseKind::SM4, -1}, 2) == -2);
  for (int x = 0; x <= 1; ++x) CHECK(synapse_contribution({SynapseKind::SM1, 0}, x) == 0);
  CHECK(synapse_contribution({SynapseKind::SM2, -2}, 1) == -2);
  CHECK_THROWS_AS(synapse_contribution({SynapseKind::SM2, 1}, 2), InputError);
  CHECK_THROWS_AS(synapse_contribution({SynapseKind::SM4, 1}, -1), InputError);
  CHECK_THROWS_AS(SynapseConfig({SynapseKind::SM1, -1}).validate(), InputError);
  CHECK_THROWS_AS(SynapseConfig({SynapseKind::SM4, 3}).validate(), InputError);
}

TEST_CASE("synapse kinds and cell assignment") {
  CHECK(parse_synapse_kind("SM2") == SynapseKind::SM2);
  CHECK(to_string(SynapseKind::SM4) == "SM4");
  CHECK_THROWS_AS(parse_synapse_kind("SM3"), InputError);
  CHECK(unit_cells(SynapseKind::SM1) == 1);
  CHECK(unit_cells(SynapseKind::SM2) == 2);
  CHECK(unit_cells(SynapseKind::SM4) == 4);
  auto neg = assign_cells({SynapseKind::SM4, -2});
  CHECK(neg.positive == 0);
  CHECK(neg.negative == 2);
  auto pos = assign_cells({SynapseKind::SM2, 1});
  CHECK(pos.positive == 1);
  CHECK(pos.negative == 0);
}

TEST_CASE("quantizer pulse counts") {
  BqConfig cfg;
  auto six = bq_quantize(6, cfg, 100.0);
  CHECK(six.times() == std::vector<double>{100, 120, 140, 160, 180, 200});
  CHECK(bq_quantize(-2, cfg, 0.0).empty());
  CHECK(bq_quantize(0, cfg, 0.0).empty());

  // x = (1,1,2,2), w = (1,1,1,-1) ... plus the representative total of 4
  int u = 0;
  std::vector<int> x{1, 1, 2, 2}, w{1, 1, 1, -1};
  for (int k = 0; k < 4; ++k) u += synapse_contribution({SynapseKind::SM4, w[k]}, x[k]);
  CHECK(bq_quantize(u, cfg, 0.0).size() == 2);
  CHECK(bq_quantize(4, cfg, 0.0).size() == 4);

  auto capped = BqConfig::for_clock(100.0);
  CHECK(capped.max_pulses_per_clock == 5);
  for (int v = -64; v <= 64; ++v) {
    CHECK(bq_quantize(v, capped, 0.0).size() == static_cast<std::size_t>(std::clamp(v, 0, 5)));
  }
  CHECK_THROWS_AS(bq_quantize(65, cfg, 0.0), InputError);
  CHECK_THROWS_AS(BqConfig::for_clock(0.0), InputError);
}

TEST_CASE("splitter trees") {
  CHECK(splitter_depth(1) == 0);
  CHECK(splitter_depth(2) == 1);
  CHECK(splitter_depth(3) == 2);
  CHECK(splitter_depth(4) == 2);
  CHECK(splitter_depth(5) == 3);
  SpikeTrain in("x", {0, 30});
  auto one = splitter_fanout(in, 1, 5.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].times() == in.times());
  for (int n : {3, 4}) {
    auto copies = splitter_fanout(in, n, 5.0);
    REQUIRE(copies.size() == static_cast<std::size_t>(n));
    for (const auto& c : copies) CHECK(c.times() == std::vector<double>{10, 40});
  }
  CHECK_THROWS_AS(splitter_fanout(in, 0, 5.0), InputError);
}

TEST_CASE("clock latch forwards one pulse per window") {
  SpikeTrain in("s", {20, 60, 100, 1200});
  auto out = clock_latch(in, 1000.0, 0.0, "out");
  CHECK(out.node() == "out");
  CHECK(out.times() == std::vector<double>{1000, 2000});
  CHECK(clock_latch(SpikeTrain("s"), 1000.0).empty());
  CHECK(clock_latch(SpikeTrain("s", {999.0}), 1000.0, 500.0).times() == std::vector<double>{1500});
}
