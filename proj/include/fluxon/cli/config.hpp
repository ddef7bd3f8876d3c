#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fluxon/optimize/pso.hpp"
#include "fluxon/train/ga.hpp"

namespace fluxon::cli {

struct SplitSection {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct TrainSection {
  int hidden = 4;
  int epochs = 3000;
  double learning_rate = 0.5;
};

struct CircuitSection {
  std::filesystem::path netlist;
  std::string output_junction = "b4";
};

struct MarginsSection {
  std::filesystem::path netlist;
  std::vector<std::string> selectors;
  std::string pass_test = "pulses(b4)==1";
  double resolution = 0.01;
  double bound = 0.9;
  double step_ps = 0.0;
  double stop_ps = 0.0;
};

struct PsoSection {
  std::string objective = "margin";  ///< margin | sphere | rosenbrock
  int dim = 5;                        ///< benchmark objectives only
  double bound = 10.0;                ///< benchmark objectives only
  std::filesystem::path netlist;
  std::vector<std::string> selectors;
  std::vector<optimize::Bounds> bounds;
  std::vector<std::string> scanned;
  std::string pass_test = "pulses(b4)==1";
  double resolution = 0.01;
  double step_ps = 0.0;
  double stop_ps = 0.0;
  int particles = 30;
  int iterations = 200;
};

struct PowerSection {
  std::vector<std::filesystem::path> configs;
  std::string projection_base = "nw_b";
  int cores = 256;
  int neurons_per_core = 256;
};

/// Everything a command needs. Relative paths in a config file resolve
/// against the file's directory.
struct RunConfig {
  std::uint64_t seed = 7;
  std::filesystem::path dataset;
  std::filesystem::path out = "out";
  int jobs = 1;
  double clock_ps = 1000.0;
  SplitSection split;
  TrainSection train;
  train::GaConfig ga;
  CircuitSection circuit;
  MarginsSection margins;
  PsoSection pso;
  PowerSection power;
};

/// Built-in defaults pointing at the bundled data and configs.
RunConfig default_config();

/// Defaults overlaid with a JSON config file. Throws InputError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies the global seed to the stochastic stages (GA and PSO).
void propagate_seed(RunConfig& cfg);

/// Throws InputError("<what> not found: <path>") if the path is missing.
void require_file(const std::filesystem::path& path, const std::string& what);

}  // namespace fluxon::cli
