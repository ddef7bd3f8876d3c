#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <vector>

namespace fluxon::train {

/// Fully connected network with logistic sigmoid units on every layer.
/// Inputs are columns: X is (n_inputs x n_samples).
class RealMlp {
 public:
  RealMlp() = default;
  /// Weights drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases 0.
  RealMlp(std::vector<int> layer_sizes, std::uint64_t seed);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  std::size_t n_layers() const { return weights_.size(); }

  /// weights(l) is (n_out x n_in) for layer l.
  const Eigen::MatrixXd& weights(std::size_t l) const { return weights_[l]; }
  const Eigen::VectorXd& biases(std::size_t l) const { return biases_[l]; }
  void set_layer(std::size_t l, Eigen::MatrixXd w, Eigen::VectorXd b);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  /// Mean squared error, 1/(2N) * sum of squared output errors.
  double loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const;

  /// All weights then biases, layer by layer (weights column-major).
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& p);
  std::size_t n_parameters() const;

  /// Backpropagated gradient of loss() in parameters() order.
  Eigen::VectorXd gradient(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const;

  nlohmann::json to_json() const;
  static RealMlp from_json(const nlohmann::json& doc);

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

/// Replaces the flagged hidden units by their complements
/// (sigmoid(-z) = 1 - sigmoid(z)) and adjusts the next layer so forward() is
/// unchanged. Flags run over all units layer by layer; output units cannot be
/// complemented (InputError).
RealMlp complement_units(const RealMlp& mlp, const std::vector<bool>& flags);

/// Complements every hidden unit whose bias is positive, layer by layer.
/// Afterwards each hidden unit needs a positive drive to fire.
RealMlp complement_positive_bias_units(const RealMlp& mlp);

/// Flags for complement_units() matching complement_positive_bias_units().
std::vector<bool> positive_bias_flags(const RealMlp& mlp);

/// Central-difference gradient of loss() with step h.
Eigen::VectorXd numeric_gradient(const RealMlp& mlp, const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y, double h = 1e-5);

/// ||analytic - numeric|| / max(||analytic||, ||numeric||) (0 when both vanish).
double gradient_relative_error(const RealMlp& mlp, const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& y, double h = 1e-5);

struct TrainConfig {
  int epochs = 5000;
  double learning_rate = 0.5;
  std::uint64_t seed = 1;
};

struct TrainResult {
  RealMlp mlp;
  /// Loss before each epoch's update, then the final loss (epochs + 1 values).
  std::vector<double> loss_history;
};

/// Full-batch gradient descent. Throws Error if the loss becomes NaN.
TrainResult train_mlp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const std::vector<int>& layer_sizes, const TrainConfig& cfg);

/// Fraction of columns whose arg-max output matches the arg-max target.
double argmax_accuracy(const RealMlp& mlp, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// One-hot targets (n_classes x n).
Eigen::MatrixXd one_hot(const std::vector<int>& labels, int n_classes);

/// Integer vectors as columns of a real matrix.
Eigen::MatrixXd to_matrix(const std::vector<std::vector<int>>& xs);

}  // namespace fluxon::train
