#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fluxon/core/spike_train.hpp"

namespace fluxon {

/// Writes `time_ps,node` rows sorted by time (ties by node name).
void write_event_log(std::ostream& out, std::vector<PulseEvent> events);
std::string format_event_log(std::vector<PulseEvent> events);

/// Parses an event-log CSV. Throws InputError with the line number on bad rows.
std::vector<PulseEvent> read_event_log(std::istream& in);
std::vector<PulseEvent> parse_event_log(const std::string& text);

/// Gathers events into one SpikeTrain per node, ordered by node name.
std::vector<SpikeTrain> group_by_node(std::span<const PulseEvent> events);

/// Formats a double for CSV output with round-trip precision.
std::string format_number(double value);

}  // namespace fluxon
