#pragma once

#include <span>
#include <string>

#include "fluxon/core/spike_train.hpp"

namespace fluxon::behavioral {

/// Threshold level reached by n unit pulses spaced exactly t_max apart:
/// sum_{k<n} exp(-k t_max / tau).
double calibrate_threshold(int n, double t_max_ps, double tau_ps);

/// Leaky integrate-and-fire soma. State is in pulse units: every input pulse
/// adds 1, the level decays with time constant tau, and the soma fires (and
/// resets to 0) once the level reaches v_th.
struct SomaParams {
  int n_threshold = 1;
  double tau_ps = 25.0;
  double t_max_ps = 65.0;
  double v_th = 1.0;
  double out_delay_ps = 0.0;

  /// Params with v_th calibrated from (n, t_max, tau).
  static SomaParams calibrated(int n, double t_max_ps, double tau_ps = 25.0,
                               double out_delay_ps = 0.0);

  /// Throws InputError when a field is out of range.
  void validate() const;
};

/// Default soma realizing an integer threshold theta at the 20 ps pulse
/// spacing used by the quantizer: t_max = 65 ps for theta <= 2, 20 ps above.
SomaParams soma_for_threshold(int theta, double tau_ps = 25.0);

struct SomaState {
  double level = 0.0;
  double last_time_ps = 0.0;
};

struct SomaStep {
  SomaState state;
  bool fired = false;
};

/// Applies one input pulse. Throws InputError if pulse_time precedes the
/// last update.
SomaStep soma_step(const SomaParams& params, const SomaState& state, double pulse_time_ps);

/// Output train (fire times + out_delay) for a whole input train, starting
/// from a rested soma.
SpikeTrain soma_fire_times(const SomaParams& params, const SpikeTrain& input,
                           const std::string& out_node = {});

/// Selects the active soma of a multi-threshold bank.
const SomaParams& msoma_select(std::span<const SomaParams> bank, std::size_t active_index);

}  // namespace fluxon::behavioral
