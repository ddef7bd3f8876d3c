#include "fluxon/behavioral/soma.hpp"

#include <cmath>

#include "fluxon/core/error.hpp"

namespace fluxon::behavioral {

namespace {

// A level computed by the recurrence can land a few ulps under v_th computed
// as a direct sum; pulses spaced exactly t_max must still fire.
constexpr double kFireRelTol = 1e-12;

}  // namespace

double calibrate_threshold(int n, double t_max_ps, double tau_ps) {
  if (n < 1) throw InputError("calibrate_threshold: n must be >= 1");
  if (!(t_max_ps > 0.0) || !(tau_ps > 0.0)) {
    throw InputError("calibrate_threshold: t_max and tau must be positive");
  }
  double v = 0.0;
  for (int k = 0; k < n; ++k) v += std::exp(-k * t_max_ps / tau_ps);
  return v;
}

SomaParams SomaParams::calibrated(int n, double t_max_ps, double tau_ps, double out_delay_ps) {
  SomaParams p;
  p.n_threshold = n;
  p.tau_ps = tau_ps;
  p.t_max_ps = t_max_ps;
  p.v_th = calibrate_threshold(n, t_max_ps, tau_ps);
  p.out_delay_ps = out_delay_ps;
  p.validate();
  return p;
}

void SomaParams::validate() const {
  if (n_threshold < 1 || n_threshold > 6) throw InputError("soma threshold must be in 1..6");
  if (!(tau_ps > 0.0)) throw InputError("soma tau must be positive");
  if (!(t_max_ps > 0.0)) throw InputError("soma t_max must be positive");
  if (!(v_th >= 1.0) || v_th > n_threshold) {
    throw InputError("soma v_th must lie in [1, n_threshold]");
  }
  if (!(out_delay_ps >= 0.0)) throw InputError("soma out_delay must be non-negative");
}

SomaParams soma_for_threshold(int theta, double tau_ps) {
  return SomaParams::calibrated(theta, theta <= 2 ? 65.0 : 20.0, tau_ps);
}

SomaStep soma_step(const SomaParams& params, const SomaState& state, double pulse_time_ps) {
  if (pulse_time_ps < state.last_time_ps) {
    throw InputError("soma_step: pulse at " + std::to_string(pulse_time_ps) +
                     " ps precedes last update at " + std::to_string(state.last_time_ps) + " ps");
  }
  double dt = pulse_time_ps - state.last_time_ps;
  double level = state.level * std::exp(-dt / params.tau_ps) + 1.0;
  if (level >= params.v_th * (1.0 - kFireRelTol)) {
    return {{0.0, pulse_time_ps}, true};
  }
  return {{level, pulse_time_ps}, false};
}

SpikeTrain soma_fire_times(const SomaParams& params, const SpikeTrain& input,
                           const std::string& out_node) {
  SomaState state;
  std::vector<double> out;
  for (double t : input.times()) {
    auto step = soma_step(params, state, t);
    state = step.state;
    if (step.fired) out.push_back(t + params.out_delay_ps);
  }
  return SpikeTrain(out_node, std::move(out));
}

const SomaParams& msoma_select(std::span<const SomaParams> bank, std::size_t active_index) {
  if (active_index >= bank.size()) {
    throw InputError("msoma_select: index " + std::to_string(active_index) + " out of range for " +
                     std::to_string(bank.size()) + " somas");
  }
  return bank[active_index];
}

}  // namespace fluxon::behavioral
