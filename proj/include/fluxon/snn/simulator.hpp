#pragma once

#include <json.hpp>
#include <span>
#include <vector>

#include "fluxon/core/spike_train.hpp"
#include "fluxon/snn/network_spec.hpp"

namespace fluxon::snn {

using Activations = std::vector<std::vector<int>>;

/// Reference evaluator: per neuron u = sum x_k w_k, output 1 iff u >= theta.
/// Returns the binary outputs of every layer in order.
Activations evaluate_discrete(const NetworkSpec& spec, std::span<const int> x);

struct SimOptions {
  double input_spacing_ps = 20.0;    ///< spacing of the x_k input pulses
  double bq_spacing_ps = 20.0;       ///< quantizer pulse spacing
  double bq_offset_ps = 40.0;        ///< quantizer start after the clock edge
  double splitter_stage_ps = 5.0;    ///< delay per splitter stage
  double tau_ps = 25.0;              ///< soma decay constant
};

struct ClassResult {
  enum class Kind { Index, None, Ambiguous };
  Kind kind = Kind::None;
  int index = -1;

  friend bool operator==(const ClassResult&, const ClassResult&) = default;
};

std::string to_string(const ClassResult& c);

/// Exactly one fired output gives its index; none gives None; several give
/// Ambiguous.
ClassResult classify(std::span<const int> outputs);

struct SimReport {
  /// Latched binary outputs of every layer; layer l is latched at the end of
  /// clock l.
  Activations layer_outputs;
  std::vector<int> outputs;
  std::vector<PulseEvent> events;
  ClassResult fired_class;
};

/// Clocked pulse-level simulation. Layer l is evaluated during clock l: each
/// neuron counts the pulses on its inputs, weights them, quantizes the total
/// into a pulse train, integrates it in its soma and latches at most one
/// output pulse for the next clock edge.
SimReport simulate_spiking(const NetworkSpec& spec, std::span<const int> x,
                           const SimOptions& options = {});

/// Class predicted by the spiking network (the final layer's outputs).
ClassResult classify(const NetworkSpec& spec, std::span<const int> x, const SimOptions& options = {});

struct Metrics {
  std::size_t n = 0;
  std::size_t n_correct = 0;
  std::size_t n_none = 0;
  std::size_t n_ambiguous = 0;

  double accuracy() const { return n == 0 ? 0.0 : static_cast<double>(n_correct) / n; }
};

/// Scores a batch by spiking simulation; None and Ambiguous count as errors.
Metrics score_spiking(const NetworkSpec& spec, std::span<const std::vector<int>> xs,
                      std::span<const int> labels, const SimOptions& options = {});

/// Same scoring with the discrete evaluator.
Metrics score_discrete(const NetworkSpec& spec, std::span<const std::vector<int>> xs,
                       std::span<const int> labels);

nlohmann::json to_json(const Metrics& m);

}  // namespace fluxon::snn
