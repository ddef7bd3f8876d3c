#pragma once

#include <map>
#include <string>
#include <vector>

#include "fluxon/circuit/netlist.hpp"

namespace fluxon::circuit {

/// Newton iteration failed to converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double time_ps, const std::string& what) : Error(what), time_ps_(time_ps) {}
  double time_ps() const { return time_ps_; }

 private:
  double time_ps_;
};

/// The MNA system is singular (floating node, source loop, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

struct TransientOptions {
  double stop_ps = 0.0;
  double step_ps = 0.05;
  /// Inductor currents (A) at t = 0, keyed by inductor name.
  std::map<std::string, double> initial_current;
  int max_newton_iterations = 50;
  double newton_reltol = 1e-9;
};

/// Uniformly sampled waveforms from one transient run. Node voltages and
/// inductor currents are recorded for every node and inductor; junction phase
/// (radians) and voltage for every junction.
struct TraceSet {
  double step_ps = 0.0;
  std::vector<double> time_ps;
  std::map<std::string, std::vector<double>> node_voltage;
  std::map<std::string, std::vector<double>> junction_phase;
  std::map<std::string, std::vector<double>> junction_voltage;
  std::map<std::string, std::vector<double>> inductor_current;

  /// Samples for a print request; throws InputError if absent.
  const std::vector<double>& trace(const PrintRequest& request) const;
  std::size_t size() const { return time_ps.size(); }
};

/// Fixed-step trapezoidal transient of the RCSJ circuit by modified nodal
/// analysis. Junctions obey I = Ic sin(phi) + V/Rn + C dV/dt with
/// dphi/dt = 2 pi V / Phi0; the sin term is solved by Newton iteration.
/// Identical inputs give bit-identical traces.
TraceSet run_transient(const Netlist& netlist, const TransientOptions& options);
TraceSet run_transient(const Netlist& netlist, double stop_ps, double step_ps = 0.05);

/// Uses the netlist's .tran directive (step defaults to 0.05 ps).
TraceSet run_transient(const Netlist& netlist);

/// Waveform CSV: `time_ps,<label>...`, one column per print request (all
/// junction phases when the netlist has no print requests).
std::string format_waveform_csv(const Netlist& netlist, const TraceSet& traces);

}  // namespace fluxon::circuit
