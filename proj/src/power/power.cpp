#include "fluxon/power/power.hpp"

#include <fstream>
#include <sstream>

#include "fluxon/core/constants.hpp"
#include "fluxon/core/error.hpp"
#include "fluxon/core/event_log.hpp"

namespace fluxon::power {

using nlohmann::json;

double energy_per_pulse(double ic_a) {
  if (ic_a < 0.0) throw InputError("critical current must be non-negative");
  return ic_a * kPhi0;
}

double dynamic_power(double n_cells, double ic_a, double clock_hz) {
  return n_cells * energy_per_pulse(ic_a) * clock_hz;
}

void PowerInputs::validate() const {
  auto non_negative = [&](double v, const char* what) {
    if (!(v >= 0.0)) throw InputError(name + ": " + what + " must be non-negative");
  };
  non_negative(n_cells, "n_cells");
  non_negative(ic_a, "ic_a");
  non_negative(clock_hz, "clock_hz");
  non_negative(static_on_chip_w, "static_on_chip_w");
  non_negative(sops_rated, "sops_rated");
  if (!(cooling >= 1.0)) throw InputError(name + ": cooling overhead must be >= 1");
}

PowerReport total_power(const PowerInputs& in) {
  in.validate();
  PowerReport r;
  r.name = in.name;
  r.energy_per_pulse_j = energy_per_pulse(in.ic_a);
  r.dynamic_w = dynamic_power(in.n_cells, in.ic_a, in.clock_hz);
  r.static_w = in.static_on_chip_w;
  r.on_chip_w = r.dynamic_w + r.static_w;
  r.total_w = r.on_chip_w * in.cooling;
  r.sops = in.sops_rated;
  r.sops_per_watt = r.total_w > 0.0 ? r.sops / r.total_w : 0.0;
  r.sops_worst_case = in.n_cells * in.clock_hz;
  return r;
}

Technology parse_technology(const std::string& name) {
  if (name == "RSFQ" || name == "rsfq") return Technology::RSFQ;
  if (name == "eRSFQ" || name == "ersfq" || name == "ERSFQ") return Technology::ERSFQ;
  if (name == "AQFP" || name == "aqfp") return Technology::AQFP;
  throw InputError("unknown technology '" + name + "' (expected RSFQ, eRSFQ or AQFP)");
}

std::string to_string(Technology t) {
  switch (t) {
    case Technology::RSFQ: return "RSFQ";
    case Technology::ERSFQ: return "eRSFQ";
    case Technology::AQFP: return "AQFP";
  }
  return "?";
}

PowerReport scale_projection(int cores, int neurons_per_core, const PowerReport& per_core,
                             Technology tech, const ScaleOptions& options) {
  if (cores < 1 || neurons_per_core < 1) throw InputError("core and neuron counts must be positive");
  double cooling = per_core.on_chip_w > 0.0 ? per_core.total_w / per_core.on_chip_w : 1.0;
  double static_w = per_core.static_w;
  double dynamic_w = per_core.dynamic_w;
  if (tech != Technology::RSFQ) {
    static_w = options.ersfq_static_divisor > 0.0 ? static_w / options.ersfq_static_divisor : 0.0;
  }
  if (tech == Technology::AQFP) dynamic_w /= options.aqfp_efficiency;

  PowerReport r;
  r.name = per_core.name + " x" + std::to_string(cores) + " " + to_string(tech);
  r.energy_per_pulse_j = per_core.energy_per_pulse_j;
  r.dynamic_w = dynamic_w * cores;
  r.static_w = static_w * cores;
  r.on_chip_w = r.dynamic_w + r.static_w;
  r.total_w = r.on_chip_w * cooling;
  r.sops = per_core.sops * cores;
  r.sops_per_watt = r.total_w > 0.0 ? r.sops / r.total_w : 0.0;
  r.sops_worst_case = per_core.sops_worst_case * cores;
  return r;
}

json to_json(const PowerInputs& in) {
  return {{"name", in.name},         {"n_cells", in.n_cells},
          {"ic_a", in.ic_a},         {"clock_hz", in.clock_hz},
          {"static_on_chip_w", in.static_on_chip_w},
          {"cooling", in.cooling},   {"sops_rated", in.sops_rated}};
}

PowerInputs power_inputs_from_json(const json& doc) {
  PowerInputs in;
  try {
    in.name = doc.value("name", std::string("network"));
    in.n_cells = doc.at("n_cells").get<double>();
    in.ic_a = doc.at("ic_a").get<double>();
    in.clock_hz = doc.at("clock_hz").get<double>();
    in.static_on_chip_w = doc.value("static_on_chip_w", 0.0);
    in.cooling = doc.value("cooling", 400.0);
    in.sops_rated = doc.value("sops_rated", 0.0);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed power config: ") + e.what());
  }
  in.validate();
  return in;
}

PowerInputs load_power_inputs(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("power config not found: " + path);
  try {
    return power_inputs_from_json(json::parse(f));
  } catch (const json::parse_error& e) {
    throw InputError("power config " + path + " is not valid JSON: " + e.what());
  }
}

json to_json(const PowerReport& r) {
  return {{"name", r.name},
          {"energy_per_pulse_j", r.energy_per_pulse_j},
          {"dynamic_w", r.dynamic_w},
          {"static_w", r.static_w},
          {"on_chip_w", r.on_chip_w},
          {"total_w", r.total_w},
          {"sops", r.sops},
          {"sops_per_watt", r.sops_per_watt},
          {"sops_worst_case", r.sops_worst_case}};
}

std::string csv_header() {
  return "name,energy_per_pulse_j,dynamic_w,static_w,on_chip_w,total_w,sops,sops_per_watt";
}

std::string csv_row(const PowerReport& r) {
  std::ostringstream os;
  os << r.name;
  for (double v : {r.energy_per_pulse_j, r.dynamic_w, r.static_w, r.on_chip_w, r.total_w, r.sops,
                   r.sops_per_watt}) {
    os << ',' << format_number(v);
  }
  return os.str();
}

}  // namespace fluxon::power
