#include "fluxon/train/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <spdlog/spdlog.h>

#include "fluxon/core/error.hpp"

namespace fluxon::train {

int Quantizer::level(std::size_t feature, double value) const {
  if (feature >= cuts.size()) throw InputError("quantizer has no feature " + std::to_string(feature));
  const auto& c = cuts[feature];
  return (value > c[0] ? 1 : 0) + (value > c[1] ? 1 : 0);
}

std::vector<int> Quantizer::apply(std::span<const double> features) const {
  if (features.size() != cuts.size()) {
    throw InputError("quantizer expects " + std::to_string(cuts.size()) + " features, got " +
                     std::to_string(features.size()));
  }
  std::vector<int> out(features.size());
  for (std::size_t f = 0; f < features.size(); ++f) out[f] = level(f, features[f]);
  return out;
}

std::vector<std::vector<int>> Quantizer::apply(std::span<const Sample> samples) const {
  std::vector<std::vector<int>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(apply(s.features));
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty set");
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, values.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Quantizer fit_quantizer(std::span<const Sample> train) {
  if (train.empty()) throw InputError("cannot fit a quantizer on an empty training set");
  std::size_t n_features = train.front().features.size();
  Quantizer q;
  for (std::size_t f = 0; f < n_features; ++f) {
    std::vector<double> col;
    col.reserve(train.size());
    for (const auto& s : train) {
      if (s.features.size() != n_features) throw InputError("samples differ in feature count");
      col.push_back(s.features[f]);
    }
    auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    if (*mn == *mx) {
      spdlog::warn("feature {} is constant ({}); it quantizes to 0", f, *mn);
      q.cuts.push_back({*mn, *mn});
      continue;
    }
    q.cuts.push_back({quantile(col, 1.0 / 3.0), quantile(col, 2.0 / 3.0)});
  }
  return q;
}

nlohmann::json to_json(const Quantizer& q) {
  nlohmann::json cuts = nlohmann::json::array();
  for (const auto& c : q.cuts) cuts.push_back({c[0], c[1]});
  return {{"cuts", cuts}};
}

Quantizer quantizer_from_json(const nlohmann::json& doc) {
  Quantizer q;
  try {
    for (const auto& c : doc.at("cuts")) {
      auto pair = c.get<std::vector<double>>();
      if (pair.size() != 2 || pair[0] > pair[1]) throw InputError("quantizer cuts must be [c1, c2] with c1 <= c2");
      q.cuts.push_back({pair[0], pair[1]});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed quantizer: ") + e.what());
  }
  return q;
}

}  // namespace fluxon::train
