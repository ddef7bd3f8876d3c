#include "fluxon/behavioral/axon.hpp"

#include <cmath>

#include "fluxon/core/error.hpp"

namespace fluxon::behavioral {

int splitter_depth(int n_out) {
  if (n_out < 1) throw InputError("splitter fan-out must be >= 1");
  int depth = 0;
  while ((1 << depth) < n_out) ++depth;
  return depth;
}

std::vector<SpikeTrain> splitter_fanout(const SpikeTrain& input, int n_out,
                                        double per_stage_delay_ps) {
  if (per_stage_delay_ps < 0.0) throw InputError("splitter delay must be non-negative");
  double delay = splitter_depth(n_out) * per_stage_delay_ps;
  return std::vector<SpikeTrain>(static_cast<std::size_t>(n_out), input.delayed(delay));
}

SpikeTrain clock_latch(const SpikeTrain& input, double clock_ps, double phase_ps,
                       const std::string& out_node) {
  if (!(clock_ps > 0.0)) throw InputError("latch clock period must be positive");
  std::vector<double> out;
  for (double t : input.times()) {
    double edge = phase_ps + (std::floor((t - phase_ps) / clock_ps) + 1.0) * clock_ps;
    if (out.empty() || edge > out.back()) out.push_back(edge);
  }
  return SpikeTrain(out_node, std::move(out));
}

}  // namespace fluxon::behavioral
