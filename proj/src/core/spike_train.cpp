#include "fluxon/core/spike_train.hpp"

#include <algorithm>
#include <cmath>

#include "fluxon/core/constants.hpp"
#include "fluxon/core/error.hpp"

namespace fluxon {

namespace {

void normalize(std::vector<double>& times) {
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw InputError("spike train time must be finite and non-negative");
    }
  }
  std::sort(times.begin(), times.end());
  auto out = times.begin();
  for (auto it = times.begin(); it != times.end(); ++it) {
    if (out != times.begin() && *it - *(out - 1) < kDuplicateTolerancePs) {
      continue;
    }
    *out++ = *it;
  }
  times.erase(out, times.end());
}

}  // namespace

SpikeTrain::SpikeTrain(std::string node, std::vector<double> times_ps)
    : node_(std::move(node)), times_(std::move(times_ps)) {
  normalize(times_);
}

SpikeTrain SpikeTrain::delayed(double delay_ps) const {
  if (delay_ps < 0.0) {
    throw InputError("delay must be non-negative");
  }
  SpikeTrain out = *this;
  for (double& t : out.times_) t += delay_ps;
  return out;
}

SpikeTrain SpikeTrain::renamed(std::string node) const {
  SpikeTrain out = *this;
  out.node_ = std::move(node);
  return out;
}

std::vector<PulseEvent> SpikeTrain::events() const {
  std::vector<PulseEvent> out;
  out.reserve(times_.size());
  for (double t : times_) out.push_back({t, node_});
  return out;
}

SpikeTrain merge_trains(std::span<const SpikeTrain> trains) {
  if (trains.empty()) return {};
  std::size_t total = 0;
  for (const auto& t : trains) total += t.size();
  std::vector<double> times;
  times.reserve(total);
  for (const auto& t : trains) {
    times.insert(times.end(), t.times().begin(), t.times().end());
  }
  return SpikeTrain(trains.front().node(), std::move(times));
}

}  // namespace fluxon
