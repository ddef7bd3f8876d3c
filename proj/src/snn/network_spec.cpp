#include "fluxon/snn/network_spec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fluxon/core/error.hpp"

namespace fluxon::snn {

using nlohmann::json;

void NetworkSpec::validate() const {
  if (input_dim < 1) throw InputError("network input_dim must be >= 1");
  if (!(clock_ps > 0.0)) throw InputError("network clock_ps must be positive");
  if (layers.empty()) throw InputError("network has no layers");
  if (threshold_set.empty()) throw InputError("network threshold_set is empty");
  std::size_t fan_in = static_cast<std::size_t>(input_dim);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    std::string where = "layer " + std::to_string(l);
    if (layer.weights.empty()) throw InputError(where + " has no neurons");
    if (layer.thresholds.size() != layer.n_neurons()) {
      throw InputError(where + ": " + std::to_string(layer.thresholds.size()) + " thresholds for " +
                       std::to_string(layer.n_neurons()) + " neurons");
    }
    int max_input = l == 0 ? kMaxInputLevel : 1;
    behavioral::SynapseConfig probe{layer.synapse, 0};
    if (probe.max_input() < max_input) {
      throw InputError(where + ": " + behavioral::to_string(layer.synapse) +
                       " cannot take inputs up to " + std::to_string(max_input));
    }
    for (std::size_t i = 0; i < layer.n_neurons(); ++i) {
      const auto& row = layer.weights[i];
      if (row.size() != fan_in) {
        throw InputError(where + " neuron " + std::to_string(i) + ": expected " +
                         std::to_string(fan_in) + " weights, got " + std::to_string(row.size()));
      }
      for (int w : row) behavioral::SynapseConfig{layer.synapse, w}.validate();
      int theta = layer.thresholds[i];
      if (std::find(threshold_set.begin(), threshold_set.end(), theta) == threshold_set.end()) {
        throw InputError(where + " neuron " + std::to_string(i) + ": threshold " +
                         std::to_string(theta) + " not in threshold_set");
      }
      if (theta < 1 || theta > 6) throw InputError(where + ": thresholds must lie in 1..6");
    }
    fan_in = layer.n_neurons();
  }
}

NetworkSpec random_network_spec(std::mt19937_64& rng, const std::vector<int>& shape,
                                const std::vector<int>& threshold_set, double clock_ps) {
  if (shape.size() < 2) throw InputError("network shape needs an input size and a layer");
  std::uniform_int_distribution<int> weight(-kWeightLimit, kWeightLimit);
  std::uniform_int_distribution<std::size_t> pick(0, threshold_set.size() - 1);
  NetworkSpec spec;
  spec.input_dim = shape.front();
  spec.clock_ps = clock_ps;
  spec.threshold_set = threshold_set;
  for (std::size_t l = 1; l < shape.size(); ++l) {
    LayerSpec layer;
    layer.synapse = l == 1 ? behavioral::SynapseKind::SM4 : behavioral::SynapseKind::SM2;
    for (int i = 0; i < shape[l]; ++i) {
      std::vector<int> row(static_cast<std::size_t>(shape[l - 1]));
      for (int& w : row) w = weight(rng);
      layer.weights.push_back(std::move(row));
      layer.thresholds.push_back(threshold_set[pick(rng)]);
    }
    spec.layers.push_back(std::move(layer));
  }
  spec.validate();
  return spec;
}

json to_json(const NetworkSpec& spec) {
  json layers = json::array();
  for (const auto& layer : spec.layers) {
    layers.push_back({{"weights", layer.weights},
                      {"thresholds", layer.thresholds},
                      {"synapse", behavioral::to_string(layer.synapse)}});
  }
  return {{"input_dim", spec.input_dim},
          {"clock_ps", spec.clock_ps},
          {"threshold_set", spec.threshold_set},
          {"layers", layers}};
}

NetworkSpec network_from_json(const json& doc) {
  NetworkSpec spec;
  try {
    spec.input_dim = doc.at("input_dim").get<int>();
    spec.clock_ps = doc.value("clock_ps", 1000.0);
    if (doc.contains("threshold_set")) spec.threshold_set = doc.at("threshold_set").get<std::vector<int>>();
    for (const auto& l : doc.at("layers")) {
      LayerSpec layer;
      layer.weights = l.at("weights").get<std::vector<std::vector<int>>>();
      layer.thresholds = l.at("thresholds").get<std::vector<int>>();
      layer.synapse = behavioral::parse_synapse_kind(l.value("synapse", std::string("SM4")));
      spec.layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed network spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string format_network(const NetworkSpec& spec) { return to_json(spec).dump(2) + "\n"; }

NetworkSpec parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("network spec is not valid JSON: ") + e.what());
  }
  return network_from_json(doc);
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("network spec not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

void save_network(const std::string& path, const NetworkSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << format_network(spec);
}

}  // namespace fluxon::snn
