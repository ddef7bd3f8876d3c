#include "fluxon/circuit/pulses.hpp"

#include <algorithm>
#include <cmath>

#include "fluxon/core/constants.hpp"

namespace fluxon::circuit {

namespace {

// Index of the 2 pi well centred on 2 pi k that holds phi.
long well(double phi) { return static_cast<long>(std::floor((phi + kPi) / (2.0 * kPi))); }

// Trapezoid integral of samples over [t0, t1], interpolating at the ends.
double integrate(std::span<const double> t, std::span<const double> v, double t0, double t1) {
  if (t.size() < 2 || t1 <= t0) return 0.0;
  auto value_at = [&](double x) {
    auto it = std::upper_bound(t.begin(), t.end(), x);
    if (it == t.begin()) return v.front();
    if (it == t.end()) return v.back();
    std::size_t i = static_cast<std::size_t>(it - t.begin());
    double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return v[i - 1] + w * (v[i] - v[i - 1]);
  };
  double total = 0.0;
  double prev_t = t0;
  double prev_v = value_at(t0);
  auto first = std::upper_bound(t.begin(), t.end(), t0);
  for (auto it = first; it != t.end() && *it < t1; ++it) {
    std::size_t i = static_cast<std::size_t>(it - t.begin());
    total += 0.5 * (prev_v + v[i]) * (t[i] - prev_t);
    prev_t = t[i];
    prev_v = v[i];
  }
  total += 0.5 * (prev_v + value_at(t1)) * (t1 - prev_t);
  return total * kPicosecond;
}

}  // namespace

SpikeTrain detect_pulses(std::span<const double> time_ps, std::span<const double> phase,
                         const std::string& node) {
  std::vector<double> events;
  if (phase.empty()) return SpikeTrain(node);
  long reached = well(phase[0]);
  for (std::size_t i = 1; i < phase.size(); ++i) {
    long w = well(phase[i]);
    while (w > reached) {
      ++reached;
      double level = (2.0 * static_cast<double>(reached) - 1.0) * kPi;
      double p0 = phase[i - 1];
      double p1 = phase[i];
      double frac = (p1 != p0) ? (level - p0) / (p1 - p0) : 0.0;
      frac = std::clamp(frac, 0.0, 1.0);
      events.push_back(time_ps[i - 1] + frac * (time_ps[i] - time_ps[i - 1]));
    }
  }
  return SpikeTrain(node, std::move(events));
}

SpikeTrain detect_pulses(const TraceSet& traces, const std::string& junction) {
  return detect_pulses(traces.time_ps, traces.trace({TraceKind::JunctionPhase, junction}), junction);
}

std::vector<double> pulse_flux(std::span<const double> time_ps, std::span<const double> voltage,
                               const SpikeTrain& pulses, double half_window_ps) {
  std::vector<double> out;
  if (time_ps.empty()) return out;
  const auto& ts = pulses.times();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double lo = k == 0 ? ts[k] - half_window_ps : 0.5 * (ts[k - 1] + ts[k]);
    double hi = k + 1 == ts.size() ? ts[k] + half_window_ps : 0.5 * (ts[k] + ts[k + 1]);
    lo = std::max(lo, time_ps.front());
    hi = std::min(hi, time_ps.back());
    out.push_back(integrate(time_ps, voltage, lo, hi));
  }
  return out;
}

std::vector<double> pulse_flux(const TraceSet& traces, const std::string& junction,
                               const SpikeTrain& pulses, double half_window_ps) {
  return pulse_flux(traces.time_ps, traces.trace({TraceKind::JunctionVoltage, junction}), pulses,
                    half_window_ps);
}

}  // namespace fluxon::circuit
