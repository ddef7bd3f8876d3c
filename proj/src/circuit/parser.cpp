#include "fluxon/circuit/parser.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fluxon/core/constants.hpp"

namespace fluxon::circuit {

namespace {

constexpr double kSecondsToPs = 1e12;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

class LineError {
 public:
  explicit LineError(int line) : line_(line) {}
  [[noreturn]] void operator()(const std::string& msg) const {
    throw InputError("netlist line " + std::to_string(line_) + ": " + msg);
  }

 private:
  int line_;
};

double value_at(const std::vector<std::string>& toks, std::size_t i, const LineError& fail,
                const char* what) {
  if (i >= toks.size()) fail(std::string("missing ") + what);
  try {
    return parse_value(toks[i]);
  } catch (const InputError& e) {
    fail(std::string("bad ") + what + " '" + toks[i] + "'");
  }
}

Waveform parse_waveform(const std::vector<std::string>& toks, const LineError& fail) {
  if (toks.size() < 4) fail("source needs a waveform");
  const std::string& kind = toks[3];
  auto v = [&](std::size_t i, const char* what) { return value_at(toks, i, fail, what); };
  auto expect_args = [&](std::size_t lo, std::size_t hi) {
    std::size_t n = toks.size() - 4;
    if (n < lo || n > hi) fail(kind + " expects " + std::to_string(lo) + " arguments");
  };
  auto non_negative = [&](double x, const char* what) {
    if (x < 0.0) fail(std::string(what) + " must be non-negative");
    return x;
  };
  if (kind == "dc") {
    expect_args(1, 1);
    return Dc{v(4, "dc value")};
  }
  if (kind == "pulse") {
    expect_args(5, 5);
    Pulse p;
    p.delay_ps = non_negative(v(4, "delay") * kSecondsToPs, "delay");
    p.rise_ps = non_negative(v(5, "rise") * kSecondsToPs, "rise");
    p.width_ps = non_negative(v(6, "width") * kSecondsToPs, "width");
    p.fall_ps = non_negative(v(7, "fall") * kSecondsToPs, "fall");
    p.amplitude = v(8, "amplitude");
    return p;
  }
  if (kind == "ptrain") {
    expect_args(5, 5);
    PulseTrain p;
    p.start_ps = non_negative(v(4, "start") * kSecondsToPs, "start");
    p.period_ps = non_negative(v(5, "period") * kSecondsToPs, "period");
    double count = v(6, "count");
    if (count < 0.0 || count != std::floor(count)) fail("count must be a non-negative integer");
    p.count = static_cast<int>(count);
    p.width_ps = non_negative(v(7, "width") * kSecondsToPs, "width");
    p.amplitude = v(8, "amplitude");
    if (!(p.period_ps > p.width_ps)) fail("pulse train period must exceed width");
    return p;
  }
  if (kind == "sin") {
    expect_args(3, 4);
    Sine s;
    s.offset = v(4, "offset");
    s.amplitude = v(5, "amplitude");
    s.freq_ghz = v(6, "frequency") * 1e-9;
    if (toks.size() > 7) s.delay_ps = non_negative(v(7, "delay") * kSecondsToPs, "delay");
    return s;
  }
  fail("unknown waveform '" + kind + "'");
}

PrintRequest parse_print_target(const std::string& tok, const LineError& fail) {
  auto open = tok.find('(');
  if (open == std::string::npos || tok.back() != ')' || open + 2 > tok.size() - 1) {
    fail("bad print request '" + tok + "'");
  }
  std::string fn = tok.substr(0, open);
  std::string arg = tok.substr(open + 1, tok.size() - open - 2);
  if (fn == "v") return {TraceKind::NodeVoltage, arg};
  if (fn == "phi" || fn == "p") return {TraceKind::JunctionPhase, arg};
  if (fn == "vj") return {TraceKind::JunctionVoltage, arg};
  if (fn == "i") return {TraceKind::InductorCurrent, arg};
  fail("unknown print function '" + fn + "'");
}

}  // namespace

double parse_value(const std::string& token) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  double number = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec != std::errc() || ptr == begin) throw InputError("bad number '" + token + "'");
  std::string suffix = lower(std::string(ptr, end));
  double scale = 1.0;
  std::size_t unit_start = 0;
  if (suffix.rfind("meg", 0) == 0) {
    scale = 1e6;
    unit_start = 3;
  } else if (!suffix.empty()) {
    switch (suffix[0]) {
      case 'f': scale = 1e-15; unit_start = 1; break;
      case 'p': scale = 1e-12; unit_start = 1; break;
      case 'n': scale = 1e-9; unit_start = 1; break;
      case 'u': scale = 1e-6; unit_start = 1; break;
      case 'm': scale = 1e-3; unit_start = 1; break;
      case 'k': scale = 1e3; unit_start = 1; break;
      default: break;
    }
  }
  for (std::size_t i = unit_start; i < suffix.size(); ++i) {
    if (!std::isalpha(static_cast<unsigned char>(suffix[i]))) {
      throw InputError("bad number '" + token + "'");
    }
  }
  return number * scale;
}

Netlist parse_netlist(const std::string& text, const JunctionDefaults& defaults) {
  Netlist net;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    LineError fail(line_no);
    auto toks = tokenize(lower(raw));
    if (toks.empty() || toks[0][0] == '*') continue;
    const std::string& head = toks[0];

    if (head[0] == '.') {
      if (head == ".end") break;
      if (head == ".tran") {
        if (toks.size() != 3) fail(".tran expects <step> <stop>");
        TranDirective tran;
        tran.step_ps = value_at(toks, 1, fail, "step") * kSecondsToPs;
        tran.stop_ps = value_at(toks, 2, fail, "stop") * kSecondsToPs;
        if (!(tran.step_ps > 0.0) || !(tran.stop_ps > 0.0)) fail(".tran values must be positive");
        net.tran = tran;
      } else if (head == ".print") {
        if (toks.size() < 2) fail(".print needs a target");
        for (std::size_t i = 1; i < toks.size(); ++i) {
          net.prints.push_back(parse_print_target(toks[i], fail));
        }
      } else {
        fail("unknown directive '" + head + "'");
      }
      continue;
    }

    if (toks.size() < 3) fail("device '" + head + "' needs two nodes");
    Device dev;
    dev.name = head;
    dev.pos = toks[1];
    dev.neg = toks[2];
    auto single_value = [&](const char* what) {
      if (toks.size() != 4) fail(std::string(what) + " device expects exactly one value");
      double v = value_at(toks, 3, fail, what);
      if (!(v > 0.0)) fail(std::string(what) + " must be positive");
      return v;
    };

    switch (head[0]) {
      case 'b': {
        Junction j;
        bool have_rn = false;
        bool have_cap = false;
        for (std::size_t i = 3; i < toks.size(); ++i) {
          auto eq = toks[i].find('=');
          if (eq == std::string::npos) fail("junction parameter '" + toks[i] + "' needs key=value");
          std::string key = toks[i].substr(0, eq);
          double v = 0.0;
          try {
            v = parse_value(toks[i].substr(eq + 1));
          } catch (const InputError&) {
            fail("bad value in '" + toks[i] + "'");
          }
          if (key == "ic") {
            j.ic = v;
          } else if (key == "rn") {
            j.rn = v;
            have_rn = true;
          } else if (key == "cap") {
            j.cap = v;
            have_cap = true;
          } else {
            fail("unknown junction parameter '" + key + "'");
          }
        }
        if (!(j.ic > 0.0)) fail("junction needs ic > 0");
        if (!have_rn) j.rn = defaults.icrn_v / j.ic;
        if (!(j.rn > 0.0)) fail("junction rn must be positive");
        if (!have_cap) j.cap = defaults.beta_c * kPhi0 / (2.0 * kPi * j.ic * j.rn * j.rn);
        if (j.cap < 0.0) fail("junction cap must be non-negative");
        dev.kind = j;
        break;
      }
      case 'l': dev.kind = Inductor{single_value("inductance")}; break;
      case 'r': dev.kind = Resistor{single_value("resistance")}; break;
      case 'c': dev.kind = Capacitor{single_value("capacitance")}; break;
      case 'k': {
        if (toks.size() != 4) fail("mutual expects K<name> L<a> L<b> <M>");
        Mutual m{toks[1], toks[2], value_at(toks, 3, fail, "mutual inductance")};
        dev.pos.clear();
        dev.neg.clear();
        dev.kind = m;
        break;
      }
      case 'i': dev.kind = CurrentSource{parse_waveform(toks, fail)}; break;
      case 'v': dev.kind = VoltageSource{parse_waveform(toks, fail)}; break;
      default: fail("unknown device letter '" + std::string(1, head[0]) + "'");
    }
    net.devices.push_back(std::move(dev));
  }

  net.validate();
  return net;
}

Netlist load_netlist(const std::string& path, const JunctionDefaults& defaults) {
  std::ifstream in(path);
  if (!in) throw InputError("netlist not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_netlist(ss.str(), defaults);
}

}  // namespace fluxon::circuit
