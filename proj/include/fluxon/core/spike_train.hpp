#pragma once

#include <span>
#include <string>
#include <vector>

namespace fluxon {

/// One SFQ pulse observed on a node.
struct PulseEvent {
  double time_ps = 0.0;
  std::string node;

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

/// Time-ordered pulses on a single node.
///
/// Times are non-negative picoseconds, strictly increasing, and no two are
/// closer than kDuplicateTolerancePs. Construction from arbitrary times sorts
/// and collapses near-duplicates, so every SpikeTrain value satisfies this.
class SpikeTrain {
 public:
  SpikeTrain() = default;
  explicit SpikeTrain(std::string node, std::vector<double> times_ps = {});

  const std::string& node() const { return node_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double operator[](std::size_t i) const { return times_[i]; }

  /// Returns a copy with every time shifted by delay_ps (delay_ps >= 0).
  SpikeTrain delayed(double delay_ps) const;
  SpikeTrain renamed(std::string node) const;

  std::vector<PulseEvent> events() const;

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;

 private:
  std::string node_;
  std::vector<double> times_;
};

/// Time-sorted union of all trains. The result carries the first train's node
/// name (empty when the input is empty).
SpikeTrain merge_trains(std::span<const SpikeTrain> trains);

}  // namespace fluxon
