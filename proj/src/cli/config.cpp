#include "fluxon/cli/config.hpp"

#include <fstream>
#include <json.hpp>

#include "fluxon/core/error.hpp"

#ifndef FLUXON_DATA_DIR
#define FLUXON_DATA_DIR "data"
#endif
#ifndef FLUXON_CONFIG_DIR
#define FLUXON_CONFIG_DIR "configs"
#endif

namespace fluxon::cli {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig default_config() {
  RunConfig c;
  const fs::path data = FLUXON_DATA_DIR;
  const fs::path configs = FLUXON_CONFIG_DIR;
  c.dataset = data / "iris.csv";
  c.split.seed = 0;
  c.circuit.netlist = data / "netlists" / "soma2.cir";
  c.margins.netlist = data / "netlists" / "soma2.cir";
  c.margins.selectors = {"iba.amp", "ibd.amp", "b1.ic", "b2.ic", "lloop.l", "rloop.r"};
  c.pso.netlist = data / "netlists" / "soma2.cir";
  c.pso.selectors = {"iba.amp", "ibd.amp"};
  c.pso.bounds = {{150e-6, 300e-6}, {100e-6, 200e-6}};
  c.pso.step_ps = 0.1;
  c.pso.stop_ps = 150.0;
  c.pso.particles = 6;
  c.pso.iterations = 20;
  c.power.configs = {configs / "power" / "iris.json", configs / "power" / "nw_a.json",
                     configs / "power" / "nw_b.json"};
  return c;
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void take_path(const json& j, const char* key, const fs::path& base, fs::path& out) {
  if (j.contains(key)) out = resolve(base, j.at(key).get<std::string>());
}

std::vector<optimize::Bounds> read_bounds(const json& j) {
  std::vector<optimize::Bounds> out;
  for (const auto& b : j) {
    auto pair = b.get<std::vector<double>>();
    if (pair.size() != 2) throw InputError("bounds entries must be [low, high]");
    out.push_back({pair[0], pair[1]});
  }
  return out;
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config not found: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  const fs::path base = path.parent_path();
  RunConfig c = default_config();
  try {
    take(doc, "seed", c.seed);
    take_path(doc, "dataset", base, c.dataset);
    take_path(doc, "out", base, c.out);
    take(doc, "jobs", c.jobs);
    take(doc, "clock_ps", c.clock_ps);
    if (doc.contains("split")) {
      const auto& s = doc["split"];
      take(s, "train_fraction", c.split.train_fraction);
      take(s, "seed", c.split.seed);
      take(s, "stratified", c.split.stratified);
    }
    if (doc.contains("train")) {
      const auto& t = doc["train"];
      take(t, "hidden", c.train.hidden);
      take(t, "epochs", c.train.epochs);
      take(t, "learning_rate", c.train.learning_rate);
    }
    if (doc.contains("ga")) {
      const auto& g = doc["ga"];
      take(g, "population", c.ga.population);
      take(g, "generations", c.ga.generations);
      take(g, "mutation_rate", c.ga.mutation_rate);
      take(g, "crossover_rate", c.ga.crossover_rate);
      take(g, "mutation_sigma", c.ga.mutation_sigma);
      take(g, "elitism", c.ga.elitism);
      take(g, "tournament", c.ga.tournament);
      take(g, "threshold_set", c.ga.threshold_set);
    }
    if (doc.contains("circuit")) {
      const auto& s = doc["circuit"];
      take_path(s, "netlist", base, c.circuit.netlist);
      take(s, "output_junction", c.circuit.output_junction);
    }
    if (doc.contains("margins")) {
      const auto& m = doc["margins"];
      take_path(m, "netlist", base, c.margins.netlist);
      take(m, "selectors", c.margins.selectors);
      take(m, "pass_test", c.margins.pass_test);
      take(m, "resolution", c.margins.resolution);
      take(m, "bound", c.margins.bound);
      take(m, "step_ps", c.margins.step_ps);
      take(m, "stop_ps", c.margins.stop_ps);
    }
    if (doc.contains("pso")) {
      const auto& p = doc["pso"];
      take(p, "objective", c.pso.objective);
      take(p, "dim", c.pso.dim);
      take(p, "bound", c.pso.bound);
      take_path(p, "netlist", base, c.pso.netlist);
      take(p, "selectors", c.pso.selectors);
      if (p.contains("bounds")) c.pso.bounds = read_bounds(p["bounds"]);
      take(p, "scanned", c.pso.scanned);
      take(p, "pass_test", c.pso.pass_test);
      take(p, "resolution", c.pso.resolution);
      take(p, "step_ps", c.pso.step_ps);
      take(p, "stop_ps", c.pso.stop_ps);
      take(p, "particles", c.pso.particles);
      take(p, "iterations", c.pso.iterations);
    }
    if (doc.contains("power")) {
      const auto& p = doc["power"];
      if (p.contains("configs")) {
        c.power.configs.clear();
        for (const auto& f : p["configs"]) c.power.configs.push_back(resolve(base, f.get<std::string>()));
      }
      take(p, "projection_base", c.power.projection_base);
      take(p, "cores", c.power.cores);
      take(p, "neurons_per_core", c.power.neurons_per_core);
    }
  } catch (const json::exception& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  return c;
}

void propagate_seed(RunConfig& cfg) { cfg.ga.seed = cfg.seed; }

void require_file(const fs::path& path, const std::string& what) {
  if (!fs::exists(path)) throw InputError(what + " not found: " + path.string());
}

}  // namespace fluxon::cli
