#include <doctest.h>

#include <cmath>

#include "fluxon/core/error.hpp"
#include "fluxon/power/power.hpp"
#include "test_support.hpp"

using namespace fluxon;
using namespace fluxon::power;

namespace {

PowerInputs load(const std::string& name) {
  return load_power_inputs((test::config_dir() / "power" / (name + ".json")).string());
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("switching energy") {
  CHECK(energy_per_pulse(109e-6) == doctest::Approx(2.254e-19).epsilon(1e-3));
  CHECK(energy_per_pulse(243e-6) == doctest::Approx(5.025e-19).epsilon(1e-3));
  CHECK(energy_per_pulse(0.0) == 0.0);
  CHECK_THROWS_AS(energy_per_pulse(-1e-6), InputError);
}

TEST_CASE("worst-case dynamic power") {
  // 88 cells, 109 uA, 1 GHz: 88 * 2.254e-19 J per clock
  CHECK(rel(88 * 2.254e-19, 1.98e-17) < 2e-3);
  CHECK(rel(dynamic_power(88, 109e-6, 1e9), 1.98e-8) < 2e-3);
  CHECK(rel(dynamic_power(532, 109e-6, 1e9), 0.12e-6) < 0.01);
  CHECK(rel(total_power(load("nw_b")).dynamic_w, 0.57e-3) < 0.01);
  CHECK(dynamic_power(0, 109e-6, 1e9) == 0.0);
}

TEST_CASE("power table") {
  struct Row {
    const char* name;
    double total_w, sops, sops_per_watt;
  };
  for (const Row& want : {Row{"iris", 14e-3, 1.2e10, 8.57e11}, Row{"nw_a", 158e-3, 4e12, 2.53e13},
                          Row{"nw_b", 2.0, 1.6e16, 8e15}}) {
    CAPTURE(want.name);
    auto r = total_power(load(want.name));
    CHECK(rel(r.total_w, want.total_w) < 0.01);
    CHECK(rel(r.sops, want.sops) < 1e-12);
    CHECK(rel(r.sops_per_watt, want.sops_per_watt) < 0.01);
    CHECK(r.on_chip_w == doctest::Approx(r.dynamic_w + r.static_w));
    CHECK(r.total_w == doctest::Approx(400.0 * r.on_chip_w));
  }
}

TEST_CASE("cooling factor of one leaves the on-chip power") {
  auto in = load("iris");
  in.cooling = 1.0;
  auto r = total_power(in);
  CHECK(r.total_w == r.on_chip_w);
  CHECK(r.sops_worst_case == 88e9);
  in.cooling = 0.5;
  CHECK_THROWS_AS(total_power(in), InputError);
}

TEST_CASE("projection scaling") {
  auto base = total_power(load("nw_b"));
  auto one = scale_projection(1, 256, base, Technology::RSFQ);
  CHECK(one.total_w == doctest::Approx(base.total_w));
  CHECK(one.sops == base.sops);

  auto order = [](double v, double target) { return std::abs(std::log10(v / target)) < 1.0; };
  auto rs = scale_projection(256, 256, base, Technology::RSFQ);
  auto er = scale_projection(256, 256, base, Technology::ERSFQ);
  auto aq = scale_projection(256, 256, base, Technology::AQFP);
  CHECK(rs.sops == doctest::Approx(256 * base.sops));
  CHECK(order(rs.sops, 1e18));
  CHECK(order(rs.sops_per_watt, 1e15));
  CHECK(order(er.sops_per_watt, 1e16));
  CHECK(order(aq.sops_per_watt, 1e17));
  CHECK(er.static_w == 0.0);
  CHECK(aq.dynamic_w == doctest::Approx(er.dynamic_w / 10.0));
  CHECK(rs.total_w == doctest::Approx(256 * base.total_w));

  ScaleOptions keep;
  keep.ersfq_static_divisor = 2.0;
  CHECK(scale_projection(2, 256, base, Technology::ERSFQ, keep).static_w == doctest::Approx(base.static_w));
  CHECK_THROWS_AS(scale_projection(0, 256, base, Technology::RSFQ), InputError);
}

TEST_CASE("technology names") {
  CHECK(parse_technology("eRSFQ") == Technology::ERSFQ);
  CHECK(to_string(Technology::AQFP) == "AQFP");
  CHECK_THROWS_AS(parse_technology("CMOS"), InputError);
}

TEST_CASE("power config parsing") {
  auto in = load("iris");
  CHECK(in.n_cells == 88);
  auto back = power_inputs_from_json(to_json(in));
  CHECK(back.static_on_chip_w == in.static_on_chip_w);
  CHECK_THROWS_AS(power_inputs_from_json(nlohmann::json::parse(R"({"name":"x"})")), InputError);
  CHECK_THROWS_AS(power_inputs_from_json(nlohmann::json::parse(R"({"n_cells":-1,"ic_a":1,"clock_hz":1})")),
                  InputError);
  CHECK_THROWS_AS(load_power_inputs("/nonexistent.json"), InputError);

  auto r = total_power(in);
  auto row = csv_row(r);
  CHECK(row.rfind("iris,", 0) == 0);
  auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(commas(row) == commas(csv_header()));
}
