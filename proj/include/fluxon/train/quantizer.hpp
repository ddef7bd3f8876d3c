#pragma once

#include <array>
#include <json.hpp>
#include <span>
#include <vector>

#include "fluxon/train/iris.hpp"

namespace fluxon::train {

/// Per-feature equal-frequency tertile cuts. A value maps to 0 when
/// v <= c1, to 1 when c1 < v <= c2, and to 2 above c2.
struct Quantizer {
  std::vector<std::array<double, 2>> cuts;

  int level(std::size_t feature, double value) const;
  std::vector<int> apply(std::span<const double> features) const;
  std::vector<std::vector<int>> apply(std::span<const Sample> samples) const;
};

/// Linear-interpolated sample quantile (as in numpy's default), q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Fits tertile cuts on training samples. A constant feature gets equal cuts
/// (it quantizes to 0) and a warning is logged.
Quantizer fit_quantizer(std::span<const Sample> train);

nlohmann::json to_json(const Quantizer& q);
Quantizer quantizer_from_json(const nlohmann::json& doc);

}  // namespace fluxon::train
