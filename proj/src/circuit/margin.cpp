#include "fluxon/circuit/margin.hpp"

#include <algorithm>
#include <cctype>

#include "fluxon/circuit/pulses.hpp"

namespace fluxon::circuit {

namespace {

TransientOptions transient_options(const Netlist& net, const MarginOptions& opt) {
  TransientOptions t;
  t.stop_ps = opt.stop_ps > 0.0 ? opt.stop_ps : (net.tran ? net.tran->stop_ps : 0.0);
  t.step_ps = opt.step_ps > 0.0 ? opt.step_ps : (net.tran ? net.tran->step_ps : 0.05);
  if (!(t.stop_ps > 0.0)) throw InputError("margin scan needs a stop time (.tran or options)");
  return t;
}

// Largest fraction in [0, bound] (to within resolution) for which the
// parameter at nominal * (1 + sign * fraction) still passes.
double search_side(const Netlist& net, const std::string& selector, double sign,
                   const PassTest& pass_test, const MarginOptions& opt) {
  auto ok = [&](double f) { return passes_at(net, selector, 1.0 + sign * f, pass_test, opt); };
  if (ok(opt.bound)) return opt.bound;
  double good = 0.0;
  double bad = opt.bound;
  while (bad - good > opt.resolution) {
    double mid = 0.5 * (good + bad);
    (ok(mid) ? good : bad) = mid;
  }
  return good;
}

}  // namespace

PassTest parse_pass_test(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(c));
  }
  if (t == "always") return [](const TraceSet&) { return true; };
  const std::string head = "pulses(";
  auto close = t.find(")==");
  if (t.rfind(head, 0) != 0 || close == std::string::npos || close <= head.size()) {
    throw InputError("bad pass test '" + text + "': expected pulses(<junction>)==<n> or always");
  }
  std::string junction = t.substr(head.size(), close - head.size());
  std::string count_text = t.substr(close + 3);
  if (count_text.empty() || !std::all_of(count_text.begin(), count_text.end(), ::isdigit)) {
    throw InputError("bad pass test '" + text + "': pulse count must be a non-negative integer");
  }
  std::size_t count = std::stoul(count_text);
  return [junction, count](const TraceSet& traces) {
    if (!traces.junction_phase.contains(junction)) {
      throw InputError("pass test references unknown junction '" + junction + "'");
    }
    return detect_pulses(traces, junction).size() == count;
  };
}

bool passes_at(const Netlist& netlist, const std::string& selector, double factor,
               const PassTest& pass_test, const MarginOptions& options) {
  Netlist copy = netlist;
  copy.set(selector, netlist.get(selector) * factor);
  try {
    return pass_test(run_transient(copy, transient_options(copy, options)));
  } catch (const ConvergenceError&) {
    return false;
  }
}

Margin margin_scan(const Netlist& netlist, const std::string& selector, const PassTest& pass_test,
                   const MarginOptions& options) {
  if (!(options.resolution > 0.0) || !(options.bound > 0.0) || options.bound >= 1.0) {
    throw InputError("margin scan needs resolution > 0 and bound in (0, 1)");
  }
  netlist.get(selector);
  if (!passes_at(netlist, selector, 1.0, pass_test, options)) {
    throw NominalFailError("nominal fails: " + selector);
  }
  Margin m;
  m.low = search_side(netlist, selector, -1.0, pass_test, options);
  m.high = search_side(netlist, selector, +1.0, pass_test, options);
  return m;
}

}  // namespace fluxon::circuit
