#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fluxon/core/error.hpp"

namespace fluxon::circuit {

// Source waveforms. Times are picoseconds, amplitudes SI (A or V).

struct Dc {
  double value = 0.0;
};

/// Single trapezoidal pulse.
struct Pulse {
  double delay_ps = 0.0;
  double rise_ps = 0.0;
  double width_ps = 0.0;
  double fall_ps = 0.0;
  double amplitude = 0.0;
};

/// `count` rectangular pulses of `width_ps`, one every `period_ps` from `start_ps`.
/// A voltage train with amplitude * width = Phi0 injects one flux quantum per pulse.
struct PulseTrain {
  double start_ps = 0.0;
  double period_ps = 0.0;
  int count = 0;
  double width_ps = 0.0;
  double amplitude = 0.0;
};

/// offset + amplitude * sin(2 pi f (t - delay)) for t >= delay, offset before.
struct Sine {
  double offset = 0.0;
  double amplitude = 0.0;
  double freq_ghz = 0.0;
  double delay_ps = 0.0;
};

using Waveform = std::variant<Dc, Pulse, PulseTrain, Sine>;

double evaluate(const Waveform& w, double t_ps);

/// Running integral of the waveform from t = 0 (amplitude * ps).
double integral(const Waveform& w, double t_ps);

/// Mean value over [t0, t1]. The transient solver samples sources this way so
/// that short rectangular pulses keep their area whatever the step.
double window_average(const Waveform& w, double t0_ps, double t1_ps);

/// Amplitude-like field of a waveform (DC value or pulse amplitude).
double amplitude_of(const Waveform& w);
void set_amplitude(Waveform& w, double value);

// Devices. Values are SI.

struct Junction {
  double ic = 0.0;
  double rn = 0.0;
  double cap = 0.0;
};

struct Inductor {
  double l = 0.0;
};

struct Resistor {
  double r = 0.0;
};

struct Capacitor {
  double c = 0.0;
};

/// Mutual inductance between two named inductors.
struct Mutual {
  std::string l1;
  std::string l2;
  double m = 0.0;
};

/// Current flows from the positive node through the source into the negative node.
struct CurrentSource {
  Waveform waveform;
};

/// v(positive) - v(negative) = waveform(t).
struct VoltageSource {
  Waveform waveform;
};

using DeviceKind =
    std::variant<Junction, Inductor, Resistor, Capacitor, Mutual, CurrentSource, VoltageSource>;

/// A named two-terminal element. Node names are lower-case; "0" is ground.
/// For Mutual devices the node fields are unused.
struct Device {
  std::string name;
  std::string pos;
  std::string neg;
  DeviceKind kind;
};

enum class TraceKind { NodeVoltage, JunctionPhase, JunctionVoltage, InductorCurrent };

struct PrintRequest {
  TraceKind kind = TraceKind::NodeVoltage;
  std::string target;

  /// Column label, e.g. "v(out)" or "phi(b3)".
  std::string label() const;
};

struct TranDirective {
  double step_ps = 0.05;
  double stop_ps = 0.0;
};

/// Parsed circuit description.
class Netlist {
 public:
  std::vector<Device> devices;
  std::optional<TranDirective> tran;
  std::vector<PrintRequest> prints;

  /// Distinct non-ground node names in order of first appearance.
  std::vector<std::string> nodes() const;
  std::size_t node_count() const { return nodes().size(); }

  const Device* find(const std::string& name) const;
  Device* find(const std::string& name);

  /// Reads a parameter addressed as "<device>.<field>", e.g. "b1.ic", "l3.l",
  /// "ib1.amp". Throws InputError naming the selector when it does not resolve.
  double get(const std::string& selector) const;
  void set(const std::string& selector, double value);

  /// Checks structural invariants; throws InputError on the first violation.
  void validate() const;
};

bool is_ground(const std::string& node);

}  // namespace fluxon::circuit
