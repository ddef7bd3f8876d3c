#pragma once

#include <span>
#include <string>
#include <vector>

#include "fluxon/circuit/transient.hpp"
#include "fluxon/core/spike_train.hpp"

namespace fluxon::circuit {

/// One event per net 2 pi advance of the phase, stamped where phi crosses
/// (2k+1) pi (linear interpolation between the bracketing samples). Backward
/// slips are not events, and re-crossing a level already passed is not
/// counted again.
SpikeTrain detect_pulses(std::span<const double> time_ps, std::span<const double> phase,
                         const std::string& node = {});

/// Pulses of one junction in a trace set.
SpikeTrain detect_pulses(const TraceSet& traces, const std::string& junction);

/// Time integral of the junction voltage (webers) around each pulse. The
/// window of a pulse extends halfway to its neighbours, and at most
/// `half_window_ps` before the first and after the last pulse.
std::vector<double> pulse_flux(std::span<const double> time_ps, std::span<const double> voltage,
                               const SpikeTrain& pulses, double half_window_ps = 20.0);

std::vector<double> pulse_flux(const TraceSet& traces, const std::string& junction,
                               const SpikeTrain& pulses, double half_window_ps = 20.0);

}  // namespace fluxon::circuit
