#include "fluxon/train/iris.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "fluxon/core/error.hpp"

namespace fluxon::train {

namespace {

const std::array<std::string, kIrisClasses> kNames{"Iris-setosa", "Iris-versicolor",
                                                   "Iris-virginica"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

int iris_class(const std::string& name) {
  for (int i = 0; i < kIrisClasses; ++i) {
    if (kNames[static_cast<std::size_t>(i)] == name) return i;
  }
  throw InputError("unknown iris class '" + name + "'");
}

const std::string& iris_class_name(int label) {
  if (label < 0 || label >= kIrisClasses) throw InputError("iris label out of range");
  return kNames[static_cast<std::size_t>(label)];
}

std::vector<Sample> load_iris(const std::string& csv_text) {
  std::vector<Sample> out;
  std::istringstream in(csv_text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw InputError("iris line " + std::to_string(line_no) + ": " + msg);
    };
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (fields.size() != kIrisFeatures + 1) {
      fail("expected 5 comma-separated fields, got " + std::to_string(fields.size()));
    }
    Sample s;
    for (int k = 0; k < kIrisFeatures; ++k) {
      const auto& tok = fields[static_cast<std::size_t>(k)];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        fail("bad number '" + tok + "'");
      }
      s.features.push_back(v);
    }
    try {
      s.label = iris_class(fields.back());
    } catch (const InputError& e) {
      fail(e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sample> load_iris_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("dataset not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_iris(ss.str());
}

Split split_dataset(std::span<const Sample> samples, double train_fraction, std::uint64_t seed,
                    bool stratified) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InputError("train fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    groups[stratified ? samples[i].label : 0].push_back(i);
  }
  std::vector<bool> to_train(samples.size(), false);
  for (auto& [label, idx] : groups) {
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * idx.size()));
    if (n_train == 0 || n_train == idx.size()) {
      throw InputError("train fraction leaves an empty partition" +
                       (stratified ? " for class " + std::to_string(label) : std::string()));
    }
    for (std::size_t j = 0; j < n_train; ++j) to_train[idx[j]] = true;
  }
  Split split;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (to_train[i] ? split.train : split.test).push_back(samples[i]);
  }
  return split;
}

}  // namespace fluxon::train
