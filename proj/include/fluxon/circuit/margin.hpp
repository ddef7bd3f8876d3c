#pragma once

#include <functional>
#include <string>

#include "fluxon/circuit/transient.hpp"

namespace fluxon::circuit {

/// The pass test already fails at the nominal parameter value.
class NominalFailError : public InputError {
 public:
  using InputError::InputError;
};

/// Functional check applied to a transient result.
using PassTest = std::function<bool(const TraceSet&)>;

/// Pass test from text: "pulses(<junction>)==<n>" (exact pulse count on a
/// junction) or "always".
PassTest parse_pass_test(const std::string& text);

struct MarginOptions {
  double resolution = 0.01;  ///< bisection stops when the bracket is this narrow (fraction)
  double bound = 0.9;        ///< search limit on each side (fraction of nominal)
  double stop_ps = 0.0;      ///< 0: use the netlist's .tran stop time
  double step_ps = 0.0;      ///< 0: use the netlist's .tran step (or 0.05 ps)
};

/// Operating interval of one parameter as fractions of its nominal value:
/// the circuit passes for values in [nominal (1 - low), nominal (1 + high)].
struct Margin {
  double low = 0.0;
  double high = 0.0;
};

/// Bisection search for the margins of `selector` (e.g. "ib1.amp").
/// Throws NominalFailError("nominal fails: ...") when pass_test fails at nominal.
/// A run that fails to converge counts as a failure.
Margin margin_scan(const Netlist& netlist, const std::string& selector, const PassTest& pass_test,
                   const MarginOptions& options = {});

/// Evaluates pass_test with `selector` scaled to nominal * factor.
bool passes_at(const Netlist& netlist, const std::string& selector, double factor,
               const PassTest& pass_test, const MarginOptions& options = {});

}  // namespace fluxon::circuit
