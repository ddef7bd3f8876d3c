#pragma once

#include <json.hpp>
#include <string>

namespace fluxon::power {

/// Energy of one SFQ switching event, Ic * Phi0 (joules).
double energy_per_pulse(double ic_a);

/// Worst case: every cell switches once per clock (watts).
double dynamic_power(double n_cells, double ic_a, double clock_hz);

struct PowerInputs {
  std::string name;
  double n_cells = 0.0;
  double ic_a = 0.0;
  double clock_hz = 0.0;
  double static_on_chip_w = 0.0;
  double cooling = 400.0;  ///< wall-plug watts per watt dissipated at 4 K
  double sops_rated = 0.0;

  void validate() const;
};

struct PowerReport {
  std::string name;
  double energy_per_pulse_j = 0.0;
  double dynamic_w = 0.0;
  double static_w = 0.0;
  double on_chip_w = 0.0;
  double total_w = 0.0;
  double sops = 0.0;
  double sops_per_watt = 0.0;
  /// n_cells * clock, for comparison with the declared SOPS.
  double sops_worst_case = 0.0;
};

PowerReport total_power(const PowerInputs& in);

enum class Technology { RSFQ, ERSFQ, AQFP };
Technology parse_technology(const std::string& name);
std::string to_string(Technology t);

struct ScaleOptions {
  /// Static power is divided by this for eRSFQ; 0 removes it entirely.
  double ersfq_static_divisor = 0.0;
  /// Extra efficiency factor of AQFP over eRSFQ.
  double aqfp_efficiency = 10.0;
};

/// Linear scaling of one core's report to `cores` cores, with the technology
/// adjustment applied to the power budget.
PowerReport scale_projection(int cores, int neurons_per_core, const PowerReport& per_core,
                             Technology tech, const ScaleOptions& options = {});

nlohmann::json to_json(const PowerInputs& in);
PowerInputs power_inputs_from_json(const nlohmann::json& doc);
PowerInputs load_power_inputs(const std::string& path);

nlohmann::json to_json(const PowerReport& r);

/// One CSV row `name,energy_per_pulse_j,...` matching csv_header().
std::string csv_header();
std::string csv_row(const PowerReport& r);

}  // namespace fluxon::power
