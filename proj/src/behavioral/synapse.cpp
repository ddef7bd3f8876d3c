#include "fluxon/behavioral/synapse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fluxon/core/error.hpp"

namespace fluxon::behavioral {

SynapseKind parse_synapse_kind(const std::string& name) {
  if (name == "SM1" || name == "sm1") return SynapseKind::SM1;
  if (name == "SM2" || name == "sm2") return SynapseKind::SM2;
  if (name == "SM4" || name == "sm4") return SynapseKind::SM4;
  throw InputError("unknown synapse kind '" + name + "' (expected SM1, SM2 or SM4)");
}

std::string to_string(SynapseKind kind) {
  switch (kind) {
    case SynapseKind::SM1: return "SM1";
    case SynapseKind::SM2: return "SM2";
    case SynapseKind::SM4: return "SM4";
  }
  return "?";
}

int unit_cells(SynapseKind kind) {
  switch (kind) {
    case SynapseKind::SM1: return 1;
    case SynapseKind::SM2: return 2;
    case SynapseKind::SM4: return 4;
  }
  return 0;
}

int SynapseConfig::max_input() const { return kind == SynapseKind::SM4 ? 2 : 1; }

void SynapseConfig::validate() const {
  int lo = kind == SynapseKind::SM1 ? 0 : -2;
  int hi = kind == SynapseKind::SM1 ? 1 : 2;
  if (weight < lo || weight > hi) {
    throw InputError(to_string(kind) + " weight " + std::to_string(weight) + " outside [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

CellAssignment assign_cells(const SynapseConfig& cfg) {
  cfg.validate();
  if (cfg.weight >= 0) return {cfg.weight, 0};
  return {0, -cfg.weight};
}

int synapse_contribution(const SynapseConfig& cfg, int x) {
  cfg.validate();
  if (x < 0 || x > cfg.max_input()) {
    throw InputError(to_string(cfg.kind) + " input " + std::to_string(x) + " outside [0, " +
                     std::to_string(cfg.max_input()) + "]");
  }
  return x * cfg.weight;
}

BqConfig BqConfig::for_clock(double clock_ps, double pulse_spacing_ps) {
  if (!(clock_ps > 0.0) || !(pulse_spacing_ps > 0.0)) {
    throw InputError("quantizer clock and spacing must be positive");
  }
  return {pulse_spacing_ps, static_cast<int>(std::floor(clock_ps / pulse_spacing_ps))};
}

SpikeTrain bq_quantize(int u, const BqConfig& cfg, double clock_start_ps, const std::string& node) {
  if (std::abs(u) > kMaxQuantizerInput) {
    throw InputError("bq_quantize: |u| = " + std::to_string(std::abs(u)) + " exceeds " +
                     std::to_string(kMaxQuantizerInput));
  }
  int n = std::clamp(u, 0, std::max(cfg.max_pulses_per_clock, 0));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) times.push_back(clock_start_ps + k * cfg.pulse_spacing_ps);
  return SpikeTrain(node, std::move(times));
}

}  // namespace fluxon::behavioral
