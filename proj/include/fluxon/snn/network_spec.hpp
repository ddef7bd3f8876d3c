#pragma once

#include <json.hpp>
#include <random>
#include <string>
#include <vector>

#include "fluxon/behavioral/synapse.hpp"

namespace fluxon::snn {

struct LayerSpec {
  /// weights[i][k]: synapse from input k to neuron i, integer in [-2, 2].
  std::vector<std::vector<int>> weights;
  std::vector<int> thresholds;
  behavioral::SynapseKind synapse = behavioral::SynapseKind::SM4;

  std::size_t n_neurons() const { return weights.size(); }
  std::size_t fan_in() const { return weights.empty() ? 0 : weights.front().size(); }
};

/// Layered feed-forward network of threshold neurons. Layer 0 takes inputs in
/// {0, 1, 2}; later layers take the binary outputs of the layer before.
struct NetworkSpec {
  int input_dim = 0;
  double clock_ps = 1000.0;
  std::vector<int> threshold_set{1, 2, 5};
  std::vector<LayerSpec> layers;

  /// Throws InputError describing the first violated constraint.
  void validate() const;
  std::size_t n_outputs() const { return layers.empty() ? 0 : layers.back().n_neurons(); }
};

inline constexpr int kMaxInputLevel = 2;
inline constexpr int kWeightLimit = 2;

/// Uniformly random weights in [-2, 2] and thresholds from threshold_set.
/// shape = {input_dim, layer sizes...}; layer 0 uses SM4, later layers SM2.
NetworkSpec random_network_spec(std::mt19937_64& rng, const std::vector<int>& shape,
                                const std::vector<int>& threshold_set = {1, 2, 5},
                                double clock_ps = 1000.0);

nlohmann::json to_json(const NetworkSpec& spec);
NetworkSpec network_from_json(const nlohmann::json& doc);

/// Pretty-printed JSON with a trailing newline.
std::string format_network(const NetworkSpec& spec);
NetworkSpec parse_network(const std::string& text);
NetworkSpec load_network(const std::string& path);
void save_network(const std::string& path, const NetworkSpec& spec);

}  // namespace fluxon::snn
