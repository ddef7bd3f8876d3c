#include "fluxon/snn/simulator.hpp"

#include <algorithm>

#include "fluxon/behavioral/axon.hpp"
#include "fluxon/behavioral/soma.hpp"
#include "fluxon/core/error.hpp"

namespace fluxon::snn {

namespace {

void check_input(const NetworkSpec& spec, std::span<const int> x) {
  if (x.size() != static_cast<std::size_t>(spec.input_dim)) {
    throw InputError("input has " + std::to_string(x.size()) + " values, network expects " +
                     std::to_string(spec.input_dim));
  }
  for (int v : x) {
    if (v < 0 || v > kMaxInputLevel) {
      throw InputError("input value " + std::to_string(v) + " outside {0, 1, 2}");
    }
  }
}

std::string node_name(std::size_t layer, std::size_t neuron, const char* part) {
  return "layer" + std::to_string(layer) + "/" + std::to_string(neuron) + "/" + part;
}

void append(std::vector<PulseEvent>& log, const SpikeTrain& train) {
  for (double t : train.times()) log.push_back({t, train.node()});
}

std::size_t count_in(const SpikeTrain& train, double from, double to) {
  const auto& t = train.times();
  return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), to) -
                                  std::lower_bound(t.begin(), t.end(), from));
}

}  // namespace

Activations evaluate_discrete(const NetworkSpec& spec, std::span<const int> x) {
  check_input(spec, x);
  Activations out;
  std::vector<int> in(x.begin(), x.end());
  for (const auto& layer : spec.layers) {
    if (in.size() != layer.fan_in()) throw InputError("layer fan-in does not match its input");
    std::vector<int> y(layer.n_neurons());
    for (std::size_t i = 0; i < layer.n_neurons(); ++i) {
      int u = 0;
      for (std::size_t k = 0; k < in.size(); ++k) u += in[k] * layer.weights[i][k];
      y[i] = u >= layer.thresholds[i] ? 1 : 0;
    }
    out.push_back(y);
    in = std::move(y);
  }
  return out;
}

std::string to_string(const ClassResult& c) {
  switch (c.kind) {
    case ClassResult::Kind::Index: return std::to_string(c.index);
    case ClassResult::Kind::None: return "none";
    case ClassResult::Kind::Ambiguous: return "ambiguous";
  }
  return "?";
}

ClassResult classify(std::span<const int> outputs) {
  ClassResult r;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i] == 0) continue;
    if (r.kind == ClassResult::Kind::Index) return {ClassResult::Kind::Ambiguous, -1};
    r = {ClassResult::Kind::Index, static_cast<int>(i)};
  }
  return r;
}

SimReport simulate_spiking(const NetworkSpec& spec, std::span<const int> x,
                           const SimOptions& options) {
  spec.validate();
  check_input(spec, x);
  const double clock = spec.clock_ps;
  auto bq = behavioral::BqConfig::for_clock(clock - options.bq_offset_ps, options.bq_spacing_ps);

  SimReport report;
  // Pulses presented to the current layer's inputs, one train per input line.
  std::vector<SpikeTrain> lines;
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::vector<double> t;
    for (int p = 0; p < x[k]; ++p) t.push_back(p * options.input_spacing_ps);
    lines.emplace_back("input/" + std::to_string(k), std::move(t));
    append(report.events, lines.back());
  }

  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const auto& layer = spec.layers[l];
    const double start = static_cast<double>(l) * clock;
    const double fanout_delay =
        behavioral::splitter_depth(static_cast<int>(layer.n_neurons())) * options.splitter_stage_ps;
    if (fanout_delay + (kMaxInputLevel - 1) * options.input_spacing_ps >= options.bq_offset_ps) {
      throw InputError("splitter delay of layer " + std::to_string(l) +
                       " does not fit before the quantizer start");
    }
    for (auto& line : lines) line = line.delayed(fanout_delay);

    std::vector<int> levels(lines.size());
    for (std::size_t k = 0; k < lines.size(); ++k) {
      levels[k] = static_cast<int>(count_in(lines[k], start, start + clock));
    }

    std::vector<SpikeTrain> next;
    std::vector<int> y(layer.n_neurons());
    for (std::size_t i = 0; i < layer.n_neurons(); ++i) {
      int u = 0;
      for (std::size_t k = 0; k < levels.size(); ++k) {
        u += behavioral::synapse_contribution({layer.synapse, layer.weights[i][k]}, levels[k]);
      }
      auto pulses = behavioral::bq_quantize(u, bq, start + options.bq_offset_ps, node_name(l, i, "bq"));
      auto soma = behavioral::soma_for_threshold(layer.thresholds[i], options.tau_ps);
      auto fired = behavioral::soma_fire_times(soma, pulses, node_name(l, i, "soma"));
      auto latched = behavioral::clock_latch(fired, clock, 0.0, node_name(l, i, "out"));
      append(report.events, pulses);
      append(report.events, fired);
      append(report.events, latched);
      y[i] = static_cast<int>(count_in(latched, start + clock, start + 2.0 * clock));
      next.push_back(std::move(latched));
    }
    report.layer_outputs.push_back(y);
    lines = std::move(next);
  }

  std::stable_sort(report.events.begin(), report.events.end(), [](const auto& a, const auto& b) {
    return a.time_ps != b.time_ps ? a.time_ps < b.time_ps : a.node < b.node;
  });
  report.outputs = report.layer_outputs.back();
  report.fired_class = classify(report.outputs);
  return report;
}

ClassResult classify(const NetworkSpec& spec, std::span<const int> x, const SimOptions& options) {
  return simulate_spiking(spec, x, options).fired_class;
}

namespace {

void tally(Metrics& m, const ClassResult& c, int label) {
  ++m.n;
  if (c.kind == ClassResult::Kind::None) ++m.n_none;
  if (c.kind == ClassResult::Kind::Ambiguous) ++m.n_ambiguous;
  if (c.kind == ClassResult::Kind::Index && c.index == label) ++m.n_correct;
}

void check_batch(std::span<const std::vector<int>> xs, std::span<const int> labels) {
  if (xs.size() != labels.size()) throw InputError("inputs and labels differ in length");
}

}  // namespace

Metrics score_spiking(const NetworkSpec& spec, std::span<const std::vector<int>> xs,
                      std::span<const int> labels, const SimOptions& options) {
  check_batch(xs, labels);
  Metrics m;
  for (std::size_t s = 0; s < xs.size(); ++s) tally(m, classify(spec, xs[s], options), labels[s]);
  return m;
}

Metrics score_discrete(const NetworkSpec& spec, std::span<const std::vector<int>> xs,
                       std::span<const int> labels) {
  check_batch(xs, labels);
  Metrics m;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    tally(m, classify(evaluate_discrete(spec, xs[s]).back()), labels[s]);
  }
  return m;
}

nlohmann::json to_json(const Metrics& m) {
  return {{"accuracy", m.accuracy()}, {"n_none", m.n_none}, {"n_ambiguous", m.n_ambiguous}};
}

}  // namespace fluxon::snn
