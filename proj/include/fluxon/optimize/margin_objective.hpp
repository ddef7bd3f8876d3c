#pragma once

#include <string>
#include <vector>

#include "fluxon/circuit/margin.hpp"
#include "fluxon/optimize/pso.hpp"

namespace fluxon::optimize {

/// Score of a candidate whose nominal point fails the pass test.
inline constexpr double kNominalFailPenalty = 1e6;

struct MarginObjectiveConfig {
  /// Parameters set from the candidate vector, in order.
  std::vector<std::string> selectors;
  /// Parameters whose margins are summed; empty means `selectors`.
  std::vector<std::string> scanned;
  circuit::MarginOptions margin;
};

/// Candidate score: -sum over scanned parameters of min(low, high) margin,
/// or kNominalFailPenalty when the candidate fails at nominal. Selectors are
/// checked against the netlist up front (InputError naming the selector).
Objective margin_objective(const circuit::Netlist& netlist, const circuit::PassTest& pass_test,
                           const MarginObjectiveConfig& cfg);

/// The netlist with selector values replaced by `values`.
circuit::Netlist substitute(const circuit::Netlist& netlist, const std::vector<std::string>& selectors,
                            std::span<const double> values);

}  // namespace fluxon::optimize
