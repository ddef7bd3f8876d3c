#pragma once

#include <vector>

#include "fluxon/core/spike_train.hpp"

namespace fluxon::behavioral {

/// Depth of a binary splitter tree with n_out leaves: ceil(log2 n_out).
int splitter_depth(int n_out);

/// n_out copies of the input, each delayed by splitter_depth(n_out) stages.
std::vector<SpikeTrain> splitter_fanout(const SpikeTrain& input, int n_out,
                                        double per_stage_delay_ps);

/// Clock-gated output latch: every clock window [phase + k T, phase + (k+1) T)
/// that holds at least one pulse yields a single pulse at the window's end.
SpikeTrain clock_latch(const SpikeTrain& input, double clock_ps, double phase_ps = 0.0,
                       const std::string& out_node = {});

}  // namespace fluxon::behavioral
