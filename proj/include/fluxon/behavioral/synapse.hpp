#pragma once

#include <string>

#include "fluxon/core/spike_train.hpp"

namespace fluxon::behavioral {

/// Synapse cells built from 1, 2 or 4 SM1 unit cells.
enum class SynapseKind { SM1, SM2, SM4 };

SynapseKind parse_synapse_kind(const std::string& name);
std::string to_string(SynapseKind kind);

/// Number of SM1 unit cells in a synapse of this kind.
int unit_cells(SynapseKind kind);

struct SynapseConfig {
  SynapseKind kind = SynapseKind::SM4;
  int weight = 0;

  /// Largest accepted input level: 1 for SM1/SM2, 2 for SM4.
  int max_input() const;
  /// Throws InputError when the weight is outside the cell's range.
  void validate() const;
};

/// Unit cells switched on for a weight: |w| cells on the positive or the
/// negative branch.
struct CellAssignment {
  int positive = 0;
  int negative = 0;
};
CellAssignment assign_cells(const SynapseConfig& cfg);

/// x * weight. Throws InputError when x is outside [0, max_input].
int synapse_contribution(const SynapseConfig& cfg, int x);

struct BqConfig {
  double pulse_spacing_ps = 20.0;
  int max_pulses_per_clock = 50;

  /// Spacing with the per-clock cap floor(clock / spacing).
  static BqConfig for_clock(double clock_ps, double pulse_spacing_ps = 20.0);
};

/// Largest |u| the quantizer accepts.
inline constexpr int kMaxQuantizerInput = 64;

/// clamp(u, 0, max_pulses_per_clock) pulses from clock_start, spaced
/// pulse_spacing apart. Negative totals emit nothing.
SpikeTrain bq_quantize(int u, const BqConfig& cfg, double clock_start_ps,
                       const std::string& node = {});

}  // namespace fluxon::behavioral
