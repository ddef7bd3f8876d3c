#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fluxon/cli/config.hpp"
#include "fluxon/snn/network_spec.hpp"
#include "fluxon/train/iris.hpp"
#include "fluxon/train/quantizer.hpp"

namespace fluxon::cli {

/// Dataset, split and fitted quantizer as the pipeline sees them.
struct PreparedData {
  std::vector<train::Sample> all;
  train::Split split;
  train::Quantizer quantizer;
  std::vector<std::vector<int>> x_train, x_test, x_all;
  std::vector<int> y_train, y_test, y_all;
};

PreparedData prepare_data(const RunConfig& cfg);

/// Distinct quantized vectors in first-seen order.
std::vector<std::vector<int>> unique_vectors(const std::vector<std::vector<int>>& xs);

void cmd_train(const RunConfig& cfg, std::ostream& log);
void cmd_discretize(const RunConfig& cfg, std::ostream& log);

struct SimulateArgs {
  std::string mode = "behavioral";
  std::optional<std::vector<int>> input;
  std::optional<std::string> netlist;
};
void cmd_simulate(const RunConfig& cfg, const SimulateArgs& args, std::ostream& log);

void cmd_power(const RunConfig& cfg, std::ostream& log);
void cmd_margins(const RunConfig& cfg, std::ostream& log);
void cmd_pso(const RunConfig& cfg, std::ostream& log);

/// First split seed in [0, max_seed] whose quantized test partition has
/// exactly `target` unique vectors (writes split_sweep.csv).
std::optional<std::uint64_t> cmd_split_sweep(const RunConfig& cfg, int target, std::uint64_t max_seed,
                                            std::ostream& log);

/// train -> discretize -> simulate -> power, then a pass/fail checklist.
/// Returns true when every checklist item passes.
bool cmd_reproduce(const RunConfig& cfg, std::ostream& log);

/// Parses "1,1,2,2" into integers. Throws InputError.
std::vector<int> parse_input_vector(const std::string& text);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace fluxon::cli
