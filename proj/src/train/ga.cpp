#include "fluxon/train/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fluxon/core/error.hpp"
#include "fluxon/snn/simulator.hpp"

namespace fluxon::train {

void GaConfig::validate() const {
  if (population < 2) throw InputError("GA population must be >= 2");
  if (generations < 0) throw InputError("GA generations must be >= 0");
  if (mutation_rate < 0.0 || mutation_rate > 1.0) throw InputError("GA mutation_rate must lie in [0, 1]");
  if (crossover_rate < 0.0 || crossover_rate > 1.0) throw InputError("GA crossover_rate must lie in [0, 1]");
  if (elitism < 0 || elitism > population) throw InputError("GA elitism must lie in [0, population]");
  if (tournament < 1) throw InputError("GA tournament size must be >= 1");
  if (threshold_set.empty()) throw InputError("GA threshold_set is empty");
  if (weight_min > weight_max) throw InputError("GA weight range is empty");
  if (!(scale_min > 0.0) || !(scale_max > scale_min)) throw InputError("GA scale range is invalid");
}

bool Fitness::better_than(const Fitness& o) const {
  if (accuracy != o.accuracy) return accuracy > o.accuracy;
  if (nonzero != o.nonzero) return nonzero < o.nonzero;
  return abs_sum < o.abs_sum;
}

snn::NetworkSpec decode(const RealMlp& original, const Chromosome& c, const GaConfig& cfg) {
  const RealMlp mlp = c.complement.empty() ? original : complement_units(original, c.complement);
  snn::NetworkSpec spec;
  spec.input_dim = mlp.layer_sizes().front();
  spec.clock_ps = cfg.clock_ps;
  spec.threshold_set = cfg.threshold_set;
  std::size_t neuron = 0;
  for (std::size_t l = 0; l < mlp.n_layers(); ++l) {
    const auto& w = mlp.weights(l);
    snn::LayerSpec layer;
    layer.synapse = l == 0 ? behavioral::SynapseKind::SM4 : behavioral::SynapseKind::SM2;
    for (Eigen::Index i = 0; i < w.rows(); ++i, ++neuron) {
      std::vector<int> row;
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        double v = std::round(c.scales.at(neuron) * w(i, j));
        row.push_back(static_cast<int>(std::clamp(v, double(cfg.weight_min), double(cfg.weight_max))));
      }
      layer.weights.push_back(std::move(row));
      layer.thresholds.push_back(cfg.threshold_set.at(static_cast<std::size_t>(c.threshold_index.at(neuron))));
    }
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

namespace {

struct Individual {
  Chromosome genes;
  Fitness fitness;
};

int nearest_threshold(const std::vector<int>& set, double target) {
  int best = 0;
  for (std::size_t k = 1; k < set.size(); ++k) {
    if (std::abs(set[k] - target) < std::abs(set[static_cast<std::size_t>(best)] - target)) {
      best = static_cast<int>(k);
    }
  }
  return best;
}

class Search {
 public:
  Search(const RealMlp& mlp, const std::vector<std::vector<int>>& xs, const std::vector<int>& labels,
         const GaConfig& cfg)
      : mlp_(mlp), xs_(xs), labels_(labels), cfg_(cfg), rng_(cfg.seed) {
    for (std::size_t l = 0; l < mlp.n_layers(); ++l) {
      for (Eigen::Index i = 0; i < mlp.biases(l).size(); ++i) hidden_.push_back(l + 1 < mlp.n_layers());
    }
    log_lo_ = std::log(cfg.scale_min);
    log_hi_ = std::log(cfg.scale_max);
  }

  Fitness evaluate(const Chromosome& c) const {
    auto spec = decode(mlp_, c, cfg_);
    Fitness f;
    f.accuracy = snn::score_discrete(spec, xs_, labels_).accuracy();
    for (const auto& layer : spec.layers) {
      for (const auto& row : layer.weights) {
        for (int w : row) {
          f.nonzero += w != 0;
          f.abs_sum += std::abs(w);
        }
      }
    }
    return f;
  }

  Chromosome random_chromosome() {
    std::uniform_real_distribution<double> log_scale(log_lo_, log_hi_);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(cfg_.threshold_set.size()) - 1);
    std::bernoulli_distribution coin(0.5);
    Chromosome c;
    c.complement = positive_bias_flags(mlp_);
    for (std::size_t g = 0; g < hidden_.size(); ++g) {
      if (hidden_[g] && coin(rng_)) c.complement[g] = coin(rng_);
    }
    auto nb = neg_biases(c.complement);
    for (double b : nb) {
      double s = std::exp(log_scale(rng_));
      c.scales.push_back(s);
      c.threshold_index.push_back(coin(rng_) ? nearest_threshold(cfg_.threshold_set, s * b) : pick(rng_));
    }
    return c;
  }

  Chromosome identity() const {
    Chromosome c;
    c.complement = positive_bias_flags(mlp_);
    for (double b : neg_biases(c.complement)) {
      c.scales.push_back(1.0);
      c.threshold_index.push_back(nearest_threshold(cfg_.threshold_set, b));
    }
    return c;
  }

  std::vector<double> neg_biases(const std::vector<bool>& flags) const {
    RealMlp m = complement_units(mlp_, flags);
    std::vector<double> out;
    for (std::size_t l = 0; l < m.n_layers(); ++l) {
      for (Eigen::Index i = 0; i < m.biases(l).size(); ++i) out.push_back(-m.biases(l)(i));
    }
    return out;
  }

  const Individual& select(const std::vector<Individual>& pop) {
    std::uniform_int_distribution<std::size_t> any(0, pop.size() - 1);
    const Individual* best = &pop[any(rng_)];
    for (int k = 1; k < cfg_.tournament; ++k) {
      const Individual* other = &pop[any(rng_)];
      if (other->fitness.better_than(best->fitness)) best = other;
    }
    return *best;
  }

  Chromosome crossover(const Chromosome& a, const Chromosome& b) {
    std::bernoulli_distribution do_cross(cfg_.crossover_rate);
    if (!do_cross(rng_)) return a;
    std::bernoulli_distribution coin(0.5);
    Chromosome child = a;
    for (std::size_t g = 0; g < child.scales.size(); ++g) {
      if (coin(rng_)) child.scales[g] = b.scales[g];
      if (coin(rng_)) child.threshold_index[g] = b.threshold_index[g];
      if (coin(rng_)) child.complement[g] = b.complement[g];
    }
    return child;
  }

  void mutate(Chromosome& c) {
    std::bernoulli_distribution hit(cfg_.mutation_rate);
    std::normal_distribution<double> step(0.0, cfg_.mutation_sigma);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(cfg_.threshold_set.size()) - 1);
    for (std::size_t g = 0; g < c.scales.size(); ++g) {
      if (hit(rng_)) {
        double ls = std::clamp(std::log(c.scales[g]) + step(rng_), log_lo_, log_hi_);
        c.scales[g] = std::exp(ls);
      }
      if (hit(rng_)) c.threshold_index[g] = pick(rng_);
      if (hidden_[g] && hit(rng_)) c.complement[g] = !c.complement[g];
    }
  }

 private:
  const RealMlp& mlp_;
  const std::vector<std::vector<int>>& xs_;
  const std::vector<int>& labels_;
  const GaConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<bool> hidden_;
  double log_lo_ = 0.0;
  double log_hi_ = 0.0;
};

GenerationStats stats(int generation, const std::vector<Individual>& pop) {
  double sum = 0.0;
  for (const auto& ind : pop) sum += ind.fitness.accuracy;
  return {generation, pop.front().fitness.accuracy, sum / static_cast<double>(pop.size())};
}

void rank(std::vector<Individual>& pop) {
  std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    return a.fitness.better_than(b.fitness);
  });
}

}  // namespace

GaResult ga_discretize(const RealMlp& mlp, const std::vector<std::vector<int>>& xs,
                       const std::vector<int>& labels, const GaConfig& cfg) {
  cfg.validate();
  if (xs.empty()) throw InputError("GA needs training data");
  if (xs.size() != labels.size()) throw InputError("GA inputs and labels differ in length");

  Search search(mlp, xs, labels, cfg);
  std::vector<Individual> pop;
  pop.reserve(static_cast<std::size_t>(cfg.population));
  pop.push_back({search.identity(), {}});
  while (pop.size() < static_cast<std::size_t>(cfg.population)) pop.push_back({search.random_chromosome(), {}});
  for (auto& ind : pop) ind.fitness = search.evaluate(ind.genes);
  rank(pop);

  GaResult result;
  result.trace.push_back(stats(0, pop));
  for (int gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Individual> next(pop.begin(), pop.begin() + cfg.elitism);
    while (next.size() < pop.size()) {
      const auto& a = search.select(pop);
      const auto& b = search.select(pop);
      Chromosome child = search.crossover(a.genes, b.genes);
      search.mutate(child);
      Fitness f = search.evaluate(child);
      next.push_back({std::move(child), f});
    }
    pop = std::move(next);
    rank(pop);
    result.trace.push_back(stats(gen, pop));
  }
  result.spec = decode(mlp, pop.front().genes, cfg);
  result.fitness = pop.front().fitness;
  return result;
}

}  // namespace fluxon::train
