#include "fluxon/train/mlp.hpp"

#include <cmath>
#include <random>

#include "fluxon/core/error.hpp"

namespace fluxon::train {

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

}  // namespace

RealMlp::RealMlp(std::vector<int> layer_sizes, std::uint64_t seed) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw InputError("an MLP needs at least input and output layers");
  for (int s : sizes_) {
    if (s < 1) throw InputError("layer sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    double r = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> dist(-r, r);
    Eigen::MatrixXd w(sizes_[l + 1], sizes_[l]);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
  }
}

void RealMlp::set_layer(std::size_t l, Eigen::MatrixXd w, Eigen::VectorXd b) {
  if (l >= weights_.size() || w.rows() != weights_[l].rows() || w.cols() != weights_[l].cols() ||
      b.size() != biases_[l].size()) {
    throw InputError("set_layer: shape mismatch");
  }
  weights_[l] = std::move(w);
  biases_[l] = std::move(b);
}

Eigen::MatrixXd RealMlp::forward(const Eigen::MatrixXd& x) const {
  if (x.rows() != sizes_.front()) throw InputError("forward: input has the wrong dimension");
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    a = sigmoid((weights_[l] * a).colwise() + biases_[l]);
  }
  return a;
}

double RealMlp::loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const {
  Eigen::MatrixXd out = forward(x);
  if (out.rows() != y.rows() || out.cols() != y.cols()) throw InputError("loss: target shape mismatch");
  return 0.5 * (out - y).squaredNorm() / static_cast<double>(x.cols());
}

std::size_t RealMlp::n_parameters() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

Eigen::VectorXd RealMlp::parameters() const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(n_parameters()));
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    p.segment(at, weights_[l].size()) = weights_[l].reshaped();
    at += weights_[l].size();
    p.segment(at, biases_[l].size()) = biases_[l];
    at += biases_[l].size();
  }
  return p;
}

void RealMlp::set_parameters(const Eigen::VectorXd& p) {
  if (p.size() != static_cast<Eigen::Index>(n_parameters())) {
    throw InputError("set_parameters: wrong parameter count");
  }
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l].reshaped() = p.segment(at, weights_[l].size());
    at += weights_[l].size();
    biases_[l] = p.segment(at, biases_[l].size());
    at += biases_[l].size();
  }
}

Eigen::VectorXd RealMlp::gradient(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const {
  std::vector<Eigen::MatrixXd> acts{x};
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    acts.push_back(sigmoid((weights_[l] * acts.back()).colwise() + biases_[l]));
  }
  const double n = static_cast<double>(x.cols());
  std::vector<Eigen::MatrixXd> dw(weights_.size());
  std::vector<Eigen::VectorXd> db(weights_.size());
  Eigen::MatrixXd delta = ((acts.back() - y).array() * acts.back().array() *
                           (1.0 - acts.back().array())).matrix() / n;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    dw[l] = delta * acts[l].transpose();
    db[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = ((weights_[l].transpose() * delta).array() * acts[l].array() *
               (1.0 - acts[l].array())).matrix();
    }
  }
  Eigen::VectorXd g(static_cast<Eigen::Index>(n_parameters()));
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    g.segment(at, dw[l].size()) = dw[l].reshaped();
    at += dw[l].size();
    g.segment(at, db[l].size()) = db[l];
    at += db[l].size();
  }
  return g;
}

nlohmann::json RealMlp::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(weights_[l].rows()));
    for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
        w[static_cast<std::size_t>(i)].push_back(weights_[l](i, j));
      }
    }
    std::vector<double> b(biases_[l].data(), biases_[l].data() + biases_[l].size());
    layers.push_back({{"weights", w}, {"biases", b}});
  }
  return {{"layer_sizes", sizes_}, {"activation", "sigmoid"}, {"layers", layers}};
}

RealMlp RealMlp::from_json(const nlohmann::json& doc) {
  RealMlp m;
  try {
    m.sizes_ = doc.at("layer_sizes").get<std::vector<int>>();
    const auto& layers = doc.at("layers");
    if (m.sizes_.size() < 2 || layers.size() + 1 != m.sizes_.size()) {
      throw InputError("mlp: layer count does not match layer_sizes");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto w = layers[l].at("weights").get<std::vector<std::vector<double>>>();
      auto b = layers[l].at("biases").get<std::vector<double>>();
      auto rows = static_cast<std::size_t>(m.sizes_[l + 1]);
      auto cols = static_cast<std::size_t>(m.sizes_[l]);
      if (w.size() != rows || b.size() != rows) throw InputError("mlp: layer shape mismatch");
      Eigen::MatrixXd wm(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      for (std::size_t i = 0; i < rows; ++i) {
        if (w[i].size() != cols) throw InputError("mlp: layer shape mismatch");
        for (std::size_t j = 0; j < cols; ++j) {
          wm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w[i][j];
        }
      }
      m.weights_.push_back(std::move(wm));
      m.biases_.push_back(Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed mlp: ") + e.what());
  }
  return m;
}

namespace {

void complement_one(RealMlp& mlp, std::size_t l, Eigen::Index i) {
  Eigen::MatrixXd w = mlp.weights(l);
  Eigen::VectorXd b = mlp.biases(l);
  Eigen::MatrixXd w_next = mlp.weights(l + 1);
  Eigen::VectorXd b_next = mlp.biases(l + 1);
  w.row(i) *= -1.0;
  b(i) = -b(i);
  b_next += w_next.col(i);
  w_next.col(i) *= -1.0;
  mlp.set_layer(l, std::move(w), std::move(b));
  mlp.set_layer(l + 1, std::move(w_next), std::move(b_next));
}

std::size_t unit_count(const RealMlp& mlp) {
  std::size_t n = 0;
  for (std::size_t l = 0; l < mlp.n_layers(); ++l) n += static_cast<std::size_t>(mlp.biases(l).size());
  return n;
}

}  // namespace

RealMlp complement_units(const RealMlp& mlp, const std::vector<bool>& flags) {
  if (flags.size() != unit_count(mlp)) throw InputError("complement flags do not match the unit count");
  RealMlp out = mlp;
  std::size_t unit = 0;
  for (std::size_t l = 0; l < mlp.n_layers(); ++l) {
    for (Eigen::Index i = 0; i < mlp.biases(l).size(); ++i, ++unit) {
      if (!flags[unit]) continue;
      if (l + 1 == mlp.n_layers()) throw InputError("output units cannot be complemented");
      complement_one(out, l, i);
    }
  }
  return out;
}

std::vector<bool> positive_bias_flags(const RealMlp& mlp) {
  RealMlp work = mlp;
  std::vector<bool> flags;
  for (std::size_t l = 0; l < mlp.n_layers(); ++l) {
    for (Eigen::Index i = 0; i < mlp.biases(l).size(); ++i) {
      bool flip = l + 1 < mlp.n_layers() && work.biases(l)(i) > 0.0;
      if (flip) complement_one(work, l, i);
      flags.push_back(flip);
    }
  }
  return flags;
}

RealMlp complement_positive_bias_units(const RealMlp& mlp) {
  return complement_units(mlp, positive_bias_flags(mlp));
}

Eigen::VectorXd numeric_gradient(const RealMlp& mlp, const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y, double h) {
  RealMlp probe = mlp;
  Eigen::VectorXd p = mlp.parameters();
  Eigen::VectorXd g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    Eigen::VectorXd q = p;
    q(i) = p(i) + h;
    probe.set_parameters(q);
    double up = probe.loss(x, y);
    q(i) = p(i) - h;
    probe.set_parameters(q);
    double down = probe.loss(x, y);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

double gradient_relative_error(const RealMlp& mlp, const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& y, double h) {
  Eigen::VectorXd a = mlp.gradient(x, y);
  Eigen::VectorXd n = numeric_gradient(mlp, x, y, h);
  double scale = std::max(a.norm(), n.norm());
  return scale == 0.0 ? 0.0 : (a - n).norm() / scale;
}

TrainResult train_mlp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const std::vector<int>& layer_sizes, const TrainConfig& cfg) {
  if (cfg.epochs < 0) throw InputError("epochs must be non-negative");
  if (!(cfg.learning_rate > 0.0)) throw InputError("learning rate must be positive");
  if (x.cols() == 0) throw InputError("no training data");
  TrainResult r{RealMlp(layer_sizes, cfg.seed), {}};
  r.loss_history.reserve(static_cast<std::size_t>(cfg.epochs) + 1);
  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    double l = r.mlp.loss(x, y);
    if (std::isnan(l)) {
      throw Error("training loss became NaN at epoch " + std::to_string(epoch) +
                  " (learning rate " + std::to_string(cfg.learning_rate) + ")");
    }
    r.loss_history.push_back(l);
    if (epoch == cfg.epochs) break;
    r.mlp.set_parameters(r.mlp.parameters() - cfg.learning_rate * r.mlp.gradient(x, y));
  }
  return r;
}

double argmax_accuracy(const RealMlp& mlp, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  Eigen::MatrixXd out = mlp.forward(x);
  std::size_t hits = 0;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    Eigen::Index a = 0;
    Eigen::Index b = 0;
    out.col(c).maxCoeff(&a);
    y.col(c).maxCoeff(&b);
    if (a == b) ++hits;
  }
  return out.cols() == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(out.cols());
}

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int n_classes) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n_classes, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes) throw InputError("label out of range");
    y(labels[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return y;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<int>>& xs) {
  if (xs.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.front().size()), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t c = 0; c < xs.size(); ++c) {
    if (xs[c].size() != xs.front().size()) throw InputError("inputs differ in length");
    for (std::size_t r = 0; r < xs[c].size(); ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = xs[c][r];
    }
  }
  return m;
}

}  // namespace fluxon::train
