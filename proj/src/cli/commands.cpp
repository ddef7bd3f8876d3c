#include "fluxon/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <spdlog/spdlog.h>

#include "fluxon/behavioral/soma.hpp"
#include "fluxon/circuit/margin.hpp"
#include "fluxon/circuit/parser.hpp"
#include "fluxon/circuit/pulses.hpp"
#include "fluxon/core/constants.hpp"
#include "fluxon/core/error.hpp"
#include "fluxon/core/event_log.hpp"
#include "fluxon/core/log.hpp"
#include "fluxon/optimize/margin_objective.hpp"
#include "fluxon/power/power.hpp"
#include "fluxon/snn/simulator.hpp"
#include "fluxon/train/ga.hpp"
#include "fluxon/train/mlp.hpp"

namespace fluxon::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

void write_json(const fs::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw InputError(what + " not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(what + " " + path.string() + " is not valid JSON: " + e.what());
  }
}

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> labels_of(const std::vector<train::Sample>& samples) {
  std::vector<int> y;
  for (const auto& s : samples) y.push_back(s.label);
  return y;
}

std::vector<int> mlp_shape(const RunConfig& cfg) {
  return {train::kIrisFeatures, cfg.train.hidden, train::kIrisClasses};
}

train::Quantizer saved_or_fitted_quantizer(const RunConfig& cfg, const PreparedData& d) {
  fs::path p = cfg.out / "quantizer.json";
  if (!fs::exists(p)) return d.quantizer;
  return train::quantizer_from_json(read_json(p, "quantizer"));
}

void requantize(PreparedData& d, const train::Quantizer& q) {
  d.quantizer = q;
  d.x_train = q.apply(d.split.train);
  d.x_test = q.apply(d.split.test);
  d.x_all = q.apply(d.all);
}

snn::NetworkSpec load_network_artifact(const RunConfig& cfg) {
  fs::path p = cfg.out / "network.json";
  if (!fs::exists(p)) throw InputError("network.json not found in " + cfg.out.string() + " (run discretize first)");
  return snn::load_network(p.string());
}

/// Fraction of inputs whose spiking layer outputs equal the discrete ones.
double spiking_match(const snn::NetworkSpec& spec, const std::vector<std::vector<int>>& xs) {
  if (xs.empty()) return 1.0;
  std::size_t same = 0;
  for (const auto& x : xs) {
    if (snn::simulate_spiking(spec, x).layer_outputs == snn::evaluate_discrete(spec, x)) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(xs.size());
}

}  // namespace

PreparedData prepare_data(const RunConfig& cfg) {
  require_file(cfg.dataset, "dataset");
  PreparedData d;
  d.all = train::load_iris_file(cfg.dataset.string());
  if (d.all.empty()) throw InputError("dataset " + cfg.dataset.string() + " is empty");
  d.split = train::split_dataset(d.all, cfg.split.train_fraction, cfg.split.seed, cfg.split.stratified);
  d.quantizer = train::fit_quantizer(d.split.train);
  d.x_train = d.quantizer.apply(d.split.train);
  d.x_test = d.quantizer.apply(d.split.test);
  d.x_all = d.quantizer.apply(d.all);
  d.y_train = labels_of(d.split.train);
  d.y_test = labels_of(d.split.test);
  d.y_all = labels_of(d.all);
  return d;
}

std::vector<std::vector<int>> unique_vectors(const std::vector<std::vector<int>>& xs) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  for (const auto& x : xs) {
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

std::vector<int> parse_input_vector(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw InputError("malformed input vector '" + text + "': expected comma-separated integers");
    }
  }
  if (out.empty()) throw InputError("malformed input vector '" + text + "'");
  return out;
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  auto d = prepare_data(cfg);
  train::TrainConfig tc{cfg.train.epochs, cfg.train.learning_rate, cfg.seed};
  Eigen::MatrixXd x = train::to_matrix(d.x_train);
  Eigen::MatrixXd y = train::one_hot(d.y_train, train::kIrisClasses);
  auto result = train::train_mlp(x, y, mlp_shape(cfg), tc);

  write_json(cfg.out / "mlp.json", result.mlp.to_json());
  write_json(cfg.out / "quantizer.json", train::to_json(d.quantizer));
  std::ostringstream csv;
  csv << "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
    csv << e << ',' << format_number(result.loss_history[e]) << '\n';
  }
  write_file(cfg.out / "train_log.csv", csv.str());

  log << "train: " << d.split.train.size() << " train / " << d.split.test.size() << " test samples\n"
      << "  loss " << result.loss_history.front() << " -> " << result.loss_history.back() << " over "
      << cfg.train.epochs << " epochs\n"
      << "  real-valued train accuracy (argmax) " << train::argmax_accuracy(result.mlp, x, y) << "\n"
      << "  wrote " << (cfg.out / "mlp.json").string() << ", train_log.csv, quantizer.json\n";
}

void cmd_discretize(const RunConfig& cfg, std::ostream& log) {
  fs::path mlp_path = cfg.out / "mlp.json";
  if (!fs::exists(mlp_path)) throw InputError("mlp.json not found in " + cfg.out.string() + " (run train first)");
  auto mlp = train::RealMlp::from_json(read_json(mlp_path, "mlp"));
  auto d = prepare_data(cfg);
  requantize(d, saved_or_fitted_quantizer(cfg, d));

  train::GaConfig ga = cfg.ga;
  ga.clock_ps = cfg.clock_ps;
  auto result = train::ga_discretize(mlp, d.x_train, d.y_train, ga);
  snn::save_network((cfg.out / "network.json").string(), result.spec);

  std::ostringstream csv;
  csv << "generation,best_fitness,mean_fitness\n";
  for (const auto& g : result.trace) {
    csv << g.generation << ',' << format_number(g.best_fitness) << ',' << format_number(g.mean_fitness) << '\n';
  }
  write_file(cfg.out / "ga_log.csv", csv.str());

  auto train_m = snn::score_discrete(result.spec, d.x_train, d.y_train);
  auto test_m = snn::score_discrete(result.spec, d.x_test, d.y_test);
  auto spiking_m = snn::score_spiking(result.spec, d.x_all, d.y_all);
  double match = spiking_match(result.spec, d.x_all);
  json metrics = {{"train", snn::to_json(train_m)},
                  {"test", snn::to_json(test_m)},
                  {"spiking_all", snn::to_json(spiking_m)},
                  {"spiking_match", match},
                  {"samples_checked", d.x_all.size()}};
  write_json(cfg.out / "metrics.json", metrics);

  log << "discretize: GA best after " << ga.generations << " generations\n"
      << "  train accuracy " << train_m.accuracy() << ", test accuracy " << test_m.accuracy() << "\n"
      << "  spiking/discrete match " << match * 100.0 << "% over " << d.x_all.size() << " samples\n"
      << "  wrote network.json, ga_log.csv, metrics.json\n";
}

void cmd_simulate(const RunConfig& cfg, const SimulateArgs& args, std::ostream& log) {
  if (args.mode == "circuit") {
    fs::path path = args.netlist ? fs::path(*args.netlist) : cfg.circuit.netlist;
    require_file(path, "netlist");
    auto net = circuit::load_netlist(path.string());
    auto traces = circuit::run_transient(net);
    write_file(cfg.out / "waveform.csv", circuit::format_waveform_csv(net, traces));
    std::vector<PulseEvent> events;
    log << "circuit: " << path.filename().string() << ", " << traces.size() << " samples\n";
    for (const auto& [name, phase] : traces.junction_phase) {
      auto pulses = circuit::detect_pulses(traces, name);
      auto flux = circuit::pulse_flux(traces, name, pulses);
      for (double t : pulses.times()) events.push_back({t, name});
      log << "  " << std::setw(6) << name << ": " << pulses.size() << " pulse(s)";
      for (std::size_t i = 0; i < pulses.size(); ++i) {
        log << "  t=" << std::fixed << std::setprecision(2) << pulses[i] << "ps flux=" << std::setprecision(3)
            << flux[i] / kPhi0 << "Phi0" << std::defaultfloat;
      }
      log << "\n";
    }
    write_file(cfg.out / "pulses.csv", format_event_log(events));
    return;
  }
  if (args.mode != "behavioral") throw InputError("unknown simulate mode '" + args.mode + "'");

  auto spec = load_network_artifact(cfg);
  std::vector<std::vector<int>> inputs;
  if (args.input) {
    inputs.push_back(*args.input);
  } else {
    auto d = prepare_data(cfg);
    requantize(d, saved_or_fitted_quantizer(cfg, d));
    inputs = unique_vectors(d.x_test);
  }

  json records = json::array();
  std::vector<PulseEvent> events;
  log << "behavioral: " << inputs.size() << " input vector(s)\n"
      << "  input     discrete  spiking   outputs\n";
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto report = snn::simulate_spiking(spec, inputs[k]);
    auto discrete = snn::evaluate_discrete(spec, inputs[k]);
    auto discrete_class = snn::classify(discrete.back());
    records.push_back({{"input", inputs[k]},
                       {"outputs", report.outputs},
                       {"layer_outputs", report.layer_outputs},
                       {"fired_class", snn::to_string(report.fired_class)},
                       {"discrete_class", snn::to_string(discrete_class)},
                       {"match", report.layer_outputs == discrete}});
    std::string prefix = inputs.size() > 1 ? "case" + std::to_string(k) + "/" : "";
    for (const auto& e : report.events) events.push_back({e.time_ps, prefix + e.node});
    log << "  " << std::left << std::setw(10) << join(inputs[k]) << std::setw(10)
        << snn::to_string(discrete_class) << std::setw(10) << snn::to_string(report.fired_class)
        << join(report.outputs, "") << std::right << "\n";
  }
  write_json(cfg.out / "sim_report.json", records);
  write_file(cfg.out / "events.csv", format_event_log(events));
}

void cmd_power(const RunConfig& cfg, std::ostream& log) {
  std::vector<power::PowerReport> reports;
  for (const auto& path : cfg.power.configs) {
    auto in = power::load_power_inputs(path.string());
    reports.push_back(power::total_power(in));
    write_json(cfg.out / "power" / (in.name + ".json"), power::to_json(reports.back()));
  }
  auto base = std::find_if(reports.begin(), reports.end(),
                           [&](const auto& r) { return r.name == cfg.power.projection_base; });
  std::vector<power::PowerReport> projections;
  if (base != reports.end()) {
    for (auto tech : {power::Technology::RSFQ, power::Technology::ERSFQ, power::Technology::AQFP}) {
      projections.push_back(power::scale_projection(cfg.power.cores, cfg.power.neurons_per_core, *base, tech));
    }
  } else if (!reports.empty()) {
    spdlog::warn("projection base '{}' not among the power configs; skipping projection",
                 cfg.power.projection_base);
  }

  std::ostringstream csv;
  csv << power::csv_header() << '\n';
  for (const auto& r : reports) csv << power::csv_row(r) << '\n';
  for (const auto& r : projections) csv << power::csv_row(r) << '\n';
  write_file(cfg.out / "power.csv", csv.str());

  log << std::left << std::setw(22) << "network" << std::right << std::setw(12) << "dynamic W"
      << std::setw(12) << "on-chip W" << std::setw(12) << "total W" << std::setw(12) << "SOPS"
      << std::setw(12) << "SOPS/W" << "\n";
  log << std::setprecision(3);
  for (const auto* list : {&reports, &projections}) {
    for (const auto& r : *list) {
      log << std::left << std::setw(22) << r.name << std::right << std::setw(12) << r.dynamic_w
          << std::setw(12) << r.on_chip_w << std::setw(12) << r.total_w << std::setw(12) << r.sops
          << std::setw(12) << r.sops_per_watt << "\n";
    }
  }
  log << std::setprecision(6);
}

void cmd_margins(const RunConfig& cfg, std::ostream& log) {
  const auto& m = cfg.margins;
  require_file(m.netlist, "netlist");
  auto net = circuit::load_netlist(m.netlist.string());
  for (const auto& s : m.selectors) net.get(s);
  auto pass = circuit::parse_pass_test(m.pass_test);
  circuit::MarginOptions opt{m.resolution, m.bound, m.stop_ps, m.step_ps};

  std::ostringstream csv;
  csv << "selector,nominal,low_pct,high_pct\n";
  log << "margins: " << m.netlist.filename().string() << ", pass test " << m.pass_test << "\n";
  for (const auto& s : m.selectors) {
    auto r = circuit::margin_scan(net, s, pass, opt);
    auto low = static_cast<int>(std::floor(r.low * 100.0 + 1e-9));
    auto high = static_cast<int>(std::floor(r.high * 100.0 + 1e-9));
    csv << s << ',' << format_number(net.get(s)) << ',' << low << ',' << high << '\n';
    log << "  " << std::left << std::setw(10) << s << std::right << " -" << std::setw(2) << low
        << "% / +" << std::setw(2) << high << "%\n";
  }
  write_file(cfg.out / "margins.csv", csv.str());
}

namespace {

optimize::Objective benchmark_objective(const std::string& name) {
  if (name == "sphere") {
    return {[](std::span<const double> x) {
              double s = 0.0;
              for (double v : x) s += v * v;
              return s;
            },
            "sphere"};
  }
  if (name == "rosenbrock") {
    return {[](std::span<const double> x) {
              double s = 0.0;
              for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
              }
              return s;
            },
            "rosenbrock"};
  }
  throw InputError("unknown PSO objective '" + name + "' (expected margin, sphere or rosenbrock)");
}

struct PsoRun {
  optimize::PsoResult result;
  std::string description;
  std::vector<std::string> names;
};

PsoRun run_pso_full(const RunConfig& cfg) {
  const auto& p = cfg.pso;
  optimize::PsoConfig pc;
  pc.n_particles = p.particles;
  pc.n_iterations = p.iterations;
  pc.seed = cfg.seed;
  pc.jobs = cfg.jobs;
  optimize::Objective objective;
  std::vector<std::string> names;
  if (p.objective == "margin") {
    require_file(p.netlist, "netlist");
    auto net = circuit::load_netlist(p.netlist.string());
    for (const auto& s : p.selectors) net.get(s);
    optimize::MarginObjectiveConfig mc;
    mc.selectors = p.selectors;
    mc.scanned = p.scanned;
    mc.margin = {p.resolution, 0.9, p.stop_ps, p.step_ps};
    objective = optimize::margin_objective(net, circuit::parse_pass_test(p.pass_test), mc);
    pc.bounds = p.bounds;
    if (pc.bounds.empty()) {
      for (const auto& s : p.selectors) pc.bounds.push_back({0.5 * net.get(s), 1.5 * net.get(s)});
    }
    if (pc.bounds.size() != p.selectors.size()) {
      throw InputError("pso: " + std::to_string(pc.bounds.size()) + " bounds for " +
                       std::to_string(p.selectors.size()) + " selectors");
    }
    names = p.selectors;
  } else {
    objective = benchmark_objective(p.objective);
    pc.bounds.assign(static_cast<std::size_t>(p.dim), {-p.bound, p.bound});
  }
  return {optimize::pso_minimize(objective, pc), objective.description, names};
}

optimize::PsoResult run_pso(const RunConfig& cfg) { return run_pso_full(cfg).result; }

}  // namespace

void cmd_pso(const RunConfig& cfg, std::ostream& log) {
  auto [result, description, names] = run_pso_full(cfg);
  write_file(cfg.out / "pso_trace.csv", optimize::format_trace_csv(result.trace));
  write_json(cfg.out / "pso_best.json", {{"objective", description},
                                         {"parameters", names},
                                         {"best", result.best},
                                         {"best_score", result.best_score}});
  log << "pso: " << description << "\n"
      << "  iteration 0 best " << result.trace.front().best_score << ", final best " << result.best_score
      << " after " << result.trace.size() << " iterations\n  best vector";
  for (double v : result.best) log << ' ' << v;
  log << "\n";
}

std::optional<std::uint64_t> cmd_split_sweep(const RunConfig& cfg, int target, std::uint64_t max_seed,
                                            std::ostream& log) {
  require_file(cfg.dataset, "dataset");
  auto samples = train::load_iris_file(cfg.dataset.string());
  std::ostringstream csv;
  csv << "seed,unique_test_vectors\n";
  std::optional<std::uint64_t> found;
  for (std::uint64_t seed = 0; seed <= max_seed; ++seed) {
    auto split = train::split_dataset(samples, cfg.split.train_fraction, seed, cfg.split.stratified);
    auto q = train::fit_quantizer(split.train);
    auto n = unique_vectors(q.apply(split.test)).size();
    csv << seed << ',' << n << '\n';
    if (static_cast<int>(n) == target) {
      found = seed;
      break;
    }
  }
  write_file(cfg.out / "split_sweep.csv", csv.str());
  if (found) {
    log << "split-sweep: seed " << *found << " gives " << target << " unique test vectors\n";
  } else {
    log << "split-sweep: no seed in [0, " << max_seed << "] gives " << target << " unique test vectors\n";
  }
  return found;
}

namespace {

struct CheckItem {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

SpikeTrain fires(int n, std::vector<double> times) {
  return behavioral::soma_fire_times(behavioral::soma_for_threshold(n), SpikeTrain("in", std::move(times)));
}

int count_fires(int n, std::vector<double> times) { return static_cast<int>(fires(n, std::move(times)).size()); }

/// Output pulses at the junction, with their flux in units of Phi0.
std::pair<SpikeTrain, std::vector<double>> junction_pulses(const circuit::Netlist& net, const std::string& junction) {
  auto traces = circuit::run_transient(net);
  auto pulses = circuit::detect_pulses(traces, junction);
  auto flux = circuit::pulse_flux(traces, junction, pulses);
  for (double& f : flux) f /= kPhi0;
  return {pulses, flux};
}

std::vector<CheckItem> checklist(const RunConfig& cfg, const fs::path& out_b) {
  std::vector<CheckItem> items;
  double e = power::energy_per_pulse(109e-6);
  items.push_back({1, "energy per pulse", within(e, 2.25e-19, 0.005), fmt(e) + " J"});
  double dyn = power::dynamic_power(88, 109e-6, 1e9);
  items.push_back({2, "iris dynamic power", within(dyn, 1.98e-8, 0.01), fmt(dyn) + " W"});

  std::map<std::string, power::PowerReport> reports;
  for (const auto& path : cfg.power.configs) {
    auto r = power::total_power(power::load_power_inputs(path.string()));
    reports[r.name] = r;
  }
  bool table = reports.size() == 3;
  const std::map<std::string, std::pair<double, double>> expected{
      {"iris", {1.2e10, 8.57e11}}, {"nw_a", {4e12, 2.53e13}}, {"nw_b", {1.6e16, 8e15}}};
  std::string detail;
  for (const auto& [name, want] : expected) {
    auto it = reports.find(name);
    if (it == reports.end()) {
      table = false;
      continue;
    }
    table = table && within(it->second.sops, want.first, 0.01) && within(it->second.sops_per_watt, want.second, 0.01);
    detail += name + " " + fmt(it->second.sops_per_watt) + " SOPS/W; ";
  }
  if (auto it = reports.find("nw_b"); it != reports.end()) {
    auto order = [](double v, double t) { return std::abs(std::log10(v / t)) < 1.0; };
    auto rs = power::scale_projection(256, 256, it->second, power::Technology::RSFQ);
    auto er = power::scale_projection(256, 256, it->second, power::Technology::ERSFQ);
    auto aq = power::scale_projection(256, 256, it->second, power::Technology::AQFP);
    table = table && order(rs.sops, 1e18) && order(rs.sops_per_watt, 1e15) && order(er.sops_per_watt, 1e16) &&
            order(aq.sops_per_watt, 1e17);
    detail += "x256: " + fmt(rs.sops) + " SOPS";
  }
  items.push_back({3, "SOPS/W table and projection", table, detail});

  auto burst = fires(2, {0, 20, 40, 60, 80, 100});
  bool timing = count_fires(2, {0, 65}) == 1 && count_fires(2, {0, 66}) == 0 && count_fires(3, {0, 20, 40}) == 1 &&
                count_fires(3, {0, 30, 60}) == 0 && burst.size() == 3 &&
                std::abs(burst[1] - burst[0] - 40.0) < 1e-9 && std::abs(burst[2] - burst[1] - 40.0) < 1e-9;
  items.push_back({4, "behavioral soma timing", timing, std::to_string(burst.size()) + " outputs for 6 pulses"});

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<int>> all_inputs;
  for (int a = 0; a < 81; ++a) all_inputs.push_back({a / 27, a / 9 % 3, a / 3 % 3, a % 3});
  std::size_t cases = 0;
  std::size_t agree = 0;
  for (int s = 0; s < 500; ++s) {
    auto spec = snn::random_network_spec(rng, {4, 4, 3});
    for (const auto& x : all_inputs) {
      ++cases;
      if (snn::simulate_spiking(spec, x).layer_outputs == snn::evaluate_discrete(spec, x)) ++agree;
    }
  }
  items.push_back({5, "spiking equals discrete (500 x 81)", agree == cases,
                   std::to_string(agree) + "/" + std::to_string(cases)});

  auto spec = load_network_artifact(cfg);
  auto metrics = read_json(cfg.out / "metrics.json", "metrics");
  bool ranges = true;
  for (const auto& layer : spec.layers) {
    for (const auto& row : layer.weights) {
      for (int w : row) ranges = ranges && w >= -2 && w <= 2;
    }
    for (int t : layer.thresholds) ranges = ranges && (t == 1 || t == 2 || t == 5);
  }
  double train_acc = metrics["train"]["accuracy"].get<double>();
  double match = metrics["spiking_match"].get<double>();
  items.push_back({6, "iris pipeline", ranges && train_acc >= 0.95 && match == 1.0,
                   "train accuracy " + fmt(train_acc) + ", spiking match " + fmt(match * 100) + "%"});

  bool soma_ok = true;
  std::string soma_detail;
  for (auto [file, n] : {std::pair{"soma2.cir", 2}, std::pair{"soma3.cir", 3}}) {
    auto path = cfg.circuit.netlist.parent_path() / file;
    if (!fs::exists(path)) {
      soma_ok = false;
      soma_detail += std::string(file) + " missing; ";
      continue;
    }
    auto base_net = circuit::load_netlist(path.string());
    auto* vin = base_net.find("vin");
    if (!vin) throw InputError(std::string(file) + " has no VIN source");
    auto& wave = std::get<circuit::VoltageSource>(vin->kind).waveform;
    for (int count : {n - 1, n}) {
      std::get<circuit::PulseTrain>(wave).count = count;
      auto [pulses, flux] = junction_pulses(base_net, cfg.circuit.output_junction);
      std::size_t want = count == n ? 1 : 0;
      soma_ok = soma_ok && pulses.size() == want;
      for (double f : flux) soma_ok = soma_ok && std::abs(f - 1.0) <= 0.02;
      soma_detail += std::string(file) + " " + std::to_string(count) + "->" + std::to_string(pulses.size()) + "; ";
    }
    if (n == 2) {
      // Continuous drive: 0.65 mV held for 30 ps.
      wave = circuit::Pulse{30.0, 1.0, 30.0, 1.0, 0.65e-3};
      auto [pulses, flux] = junction_pulses(base_net, cfg.circuit.output_junction);
      double period = pulses.size() >= 2 ? (pulses[pulses.size() - 1] - pulses[0]) / double(pulses.size() - 1) : 0.0;
      soma_ok = soma_ok && pulses.size() >= 2 && period >= 5.0 && period <= 15.0;
      soma_detail += "drive " + std::to_string(pulses.size()) + " pulses, period " + fmt(period) + " ps; ";
    }
  }
  items.push_back({7, "circuit soma thresholds", soma_ok, soma_detail});

  auto d = prepare_data(cfg);
  Eigen::MatrixXd x = train::to_matrix(d.x_train);
  Eigen::MatrixXd y = train::one_hot(d.y_train, train::kIrisClasses);
  double worst = 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  train::RealMlp probe(mlp_shape(cfg), cfg.seed);
  for (int draw = 0; draw < 100; ++draw) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(probe.n_parameters()));
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = normal(rng);
    probe.set_parameters(p);
    worst = std::max(worst, train::gradient_relative_error(probe, x, y));
  }
  items.push_back({8, "gradient check", worst <= 1e-5, "worst relative error " + fmt(worst)});

  optimize::PsoConfig pc;
  pc.bounds.assign(5, {-10.0, 10.0});
  pc.seed = cfg.seed;
  auto sphere = optimize::pso_minimize(benchmark_objective("sphere"), pc);
  bool mono = true;
  for (std::size_t i = 1; i < sphere.trace.size(); ++i) {
    mono = mono && sphere.trace[i].best_score <= sphere.trace[i - 1].best_score;
  }
  auto margin_run = run_pso(cfg);
  bool improved = margin_run.trace.back().best_score < margin_run.trace.front().best_score;
  for (std::size_t i = 1; i < margin_run.trace.size(); ++i) {
    mono = mono && margin_run.trace[i].best_score <= margin_run.trace[i - 1].best_score;
  }
  items.push_back({9, "PSO sphere and margin objective", sphere.best_score < 1e-6 && mono && improved,
                   "sphere best " + fmt(sphere.best_score) + ", margin " + fmt(margin_run.trace.front().best_score) +
                       " -> " + fmt(margin_run.best_score)});

  // Determinism: the JSON artifacts of this run against a second run.
  bool same = true;
  for (const char* name : {"mlp.json", "quantizer.json", "network.json", "metrics.json", "sim_report.json"}) {
    auto read = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    same = same && fs::exists(cfg.out / name) && read(cfg.out / name) == read(out_b / name);
  }
  items.push_back({10, "byte-identical artifacts on re-run", same, ""});
  return items;
}

void pipeline(const RunConfig& cfg, std::ostream& log) {
  cmd_train(cfg, log);
  cmd_discretize(cfg, log);
  cmd_simulate(cfg, {}, log);
  cmd_power(cfg, log);
}

}  // namespace

bool cmd_reproduce(const RunConfig& cfg, std::ostream& log) {
  pipeline(cfg, log);
  RunConfig again = cfg;
  again.out = cfg.out / "rerun";
  std::ostringstream quiet;
  pipeline(again, quiet);

  auto items = checklist(cfg, again.out);
  json doc = json::array();
  bool all = true;
  log << "\nchecklist\n";
  for (const auto& it : items) {
    all = all && it.pass;
    doc.push_back({{"id", it.id}, {"name", it.name}, {"pass", it.pass}, {"detail", it.detail}});
    log << "  [" << (it.pass ? "PASS" : "FAIL") << "] " << std::setw(2) << it.id << " " << it.name;
    if (!it.detail.empty()) log << "  (" << it.detail << ")";
    log << "\n";
  }
  write_json(cfg.out / "checklist.json", doc);
  return all;
}

int run_cli(int argc, char** argv) {
  init_logging_from_env();
  CLI::App app{"fluxon: SFQ spiking-neuromorphic design flow"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "seed for every stochastic stage");
  app.add_option("--out", out, "artifact directory");
  app.add_option("--jobs", jobs, "concurrent objective evaluations")->check(CLI::PositiveNumber);

  auto* train_cmd = app.add_subcommand("train", "train the real-valued MLP");
  auto* disc_cmd = app.add_subcommand("discretize", "GA-discretize the MLP into network.json");
  auto* sim_cmd = app.add_subcommand("simulate", "behavioral or circuit simulation");
  SimulateArgs sim_args;
  std::string input_text;
  std::string netlist_text;
  sim_cmd->add_option("--mode", sim_args.mode, "behavioral | circuit");
  sim_cmd->add_option("--input", input_text, "input vector, e.g. 1,1,2,2");
  sim_cmd->add_option("--netlist", netlist_text, "netlist for circuit mode");
  auto* power_cmd = app.add_subcommand("power", "power and SOPS reports");
  auto* margins_cmd = app.add_subcommand("margins", "parameter margin table");
  auto* pso_cmd = app.add_subcommand("pso", "particle swarm optimization");
  auto* sweep_cmd = app.add_subcommand("split-sweep", "search a split seed by unique test vectors");
  int target = 12;
  std::uint64_t max_seed = 1000;
  sweep_cmd->add_option("--target", target, "unique test vectors wanted");
  sweep_cmd->add_option("--max-seed", max_seed, "last seed to try");
  auto* repro_cmd = app.add_subcommand("reproduce-paper", "full pipeline plus checklist");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = config_path.empty() ? default_config() : load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.out = out;
    if (jobs) cfg.jobs = *jobs;
    propagate_seed(cfg);
    if (!input_text.empty()) sim_args.input = parse_input_vector(input_text);
    if (!netlist_text.empty()) sim_args.netlist = netlist_text;

    std::ostream& log = std::cout;
    if (*train_cmd) cmd_train(cfg, log);
    if (*disc_cmd) cmd_discretize(cfg, log);
    if (*sim_cmd) cmd_simulate(cfg, sim_args, log);
    if (*power_cmd) cmd_power(cfg, log);
    if (*margins_cmd) cmd_margins(cfg, log);
    if (*pso_cmd) cmd_pso(cfg, log);
    if (*sweep_cmd) return cmd_split_sweep(cfg, target, max_seed, log) ? 0 : 1;
    if (*repro_cmd) return cmd_reproduce(cfg, log) ? 0 : 1;
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fluxon::cli
