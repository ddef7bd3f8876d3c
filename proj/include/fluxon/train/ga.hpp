#pragma once

#include <cstdint>
#include <vector>

#include "fluxon/snn/network_spec.hpp"
#include "fluxon/train/mlp.hpp"

namespace fluxon::train {

struct GaConfig {
  int population = 100;
  int generations = 200;
  double mutation_rate = 0.1;   ///< per-gene probability
  double crossover_rate = 0.9;
  double mutation_sigma = 0.3;  ///< std-dev of scale mutations, natural-log units
  int elitism = 2;
  int tournament = 3;
  std::uint64_t seed = 7;
  std::vector<int> threshold_set{1, 2, 5};
  int weight_min = -2;
  int weight_max = 2;
  double scale_min = 0.05;
  double scale_max = 20.0;
  double clock_ps = 1000.0;

  void validate() const;
};

/// Per-neuron genes: a weight scale s, an index into threshold_set, and for
/// hidden neurons a complement flag (see complement_units). An empty
/// `complement` means no unit is complemented.
struct Chromosome {
  std::vector<double> scales;
  std::vector<int> threshold_index;
  std::vector<bool> complement;
};

/// Fitness ordered lexicographically: accuracy up, then nonzero weight count
/// down, then sum |w| down.
struct Fitness {
  double accuracy = 0.0;
  int nonzero = 0;
  int abs_sum = 0;

  bool better_than(const Fitness& o) const;
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct GaResult {
  snn::NetworkSpec spec;
  Fitness fitness;
  std::vector<GenerationStats> trace;
};

/// Applies the complement flags, then w' = clamp(round(s_i w), weight_min,
/// weight_max) per neuron; thresholds from the gene; biases are dropped. Layer 0 uses SM4 synapses, later
/// layers SM2.
snn::NetworkSpec decode(const RealMlp& mlp, const Chromosome& c, const GaConfig& cfg);

/// Genetic search over per-neuron scales and thresholds maximizing the
/// discrete network's training accuracy. Individual 0 of the first
/// generation is the identity decode: s = 1, hidden units with a positive
/// bias complemented, thresholds nearest to -bias.
/// Generation 0 is the initial population; `generations` further
/// generations follow.
GaResult ga_discretize(const RealMlp& mlp, const std::vector<std::vector<int>>& xs,
                       const std::vector<int>& labels, const GaConfig& cfg);

}  // namespace fluxon::train
