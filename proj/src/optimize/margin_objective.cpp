#include "fluxon/optimize/margin_objective.hpp"

#include "fluxon/core/error.hpp"

namespace fluxon::optimize {

circuit::Netlist substitute(const circuit::Netlist& netlist, const std::vector<std::string>& selectors,
                            std::span<const double> values) {
  if (values.size() != selectors.size()) {
    throw InputError("candidate has " + std::to_string(values.size()) + " values for " +
                     std::to_string(selectors.size()) + " selectors");
  }
  circuit::Netlist copy = netlist;
  for (std::size_t i = 0; i < selectors.size(); ++i) copy.set(selectors[i], values[i]);
  return copy;
}

Objective margin_objective(const circuit::Netlist& netlist, const circuit::PassTest& pass_test,
                           const MarginObjectiveConfig& cfg) {
  if (cfg.selectors.empty()) throw InputError("margin objective needs at least one selector");
  auto scanned = cfg.scanned.empty() ? cfg.selectors : cfg.scanned;
  for (const auto& s : cfg.selectors) netlist.get(s);
  for (const auto& s : scanned) netlist.get(s);

  std::string description = "-sum(min margin) over";
  for (const auto& s : scanned) description += " " + s;

  auto eval = [netlist, pass_test, selectors = cfg.selectors, scanned,
               margin = cfg.margin](std::span<const double> values) {
    circuit::Netlist candidate = substitute(netlist, selectors, values);
    double total = 0.0;
    for (const auto& s : scanned) {
      try {
        auto m = circuit::margin_scan(candidate, s, pass_test, margin);
        total += std::min(m.low, m.high);
      } catch (const circuit::NominalFailError&) {
        return kNominalFailPenalty;
      }
    }
    return -total;
  };
  return {eval, description};
}

}  // namespace fluxon::optimize
