#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fluxon::train {

struct Sample {
  std::vector<double> features;
  int label = 0;
};

inline constexpr int kIrisFeatures = 4;
inline constexpr int kIrisClasses = 3;

/// Class index of a UCI iris label (Iris-setosa -> 0, Iris-versicolor -> 1,
/// Iris-virginica -> 2). Throws InputError for anything else.
int iris_class(const std::string& name);
const std::string& iris_class_name(int label);

/// Parses UCI-format rows `5.1,3.5,1.4,0.2,Iris-setosa`. Blank lines are
/// skipped. Throws InputError naming the line on malformed rows.
std::vector<Sample> load_iris(const std::string& csv_text);
std::vector<Sample> load_iris_file(const std::string& path);

struct Split {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

/// Seeded shuffle split. Stratified splits take round(fraction * n_c) of
/// every class for training. Original order is kept inside each partition.
Split split_dataset(std::span<const Sample> samples, double train_fraction, std::uint64_t seed,
                    bool stratified = true);

}  // namespace fluxon::train
