#include "fluxon/circuit/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "fluxon/core/constants.hpp"

namespace fluxon::circuit {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double evaluate(const Waveform& w, double t) {
  return std::visit(
      Overloaded{
          [](const Dc& d) { return d.value; },
          [t](const Pulse& p) {
            double s = t - p.delay_ps;
            if (s < 0.0) return 0.0;
            if (s < p.rise_ps) return p.amplitude * s / p.rise_ps;
            s -= p.rise_ps;
            if (s <= p.width_ps) return p.amplitude;
            s -= p.width_ps;
            if (s < p.fall_ps) return p.amplitude * (1.0 - s / p.fall_ps);
            return 0.0;
          },
          [t](const PulseTrain& p) {
            double s = t - p.start_ps;
            if (s < 0.0 || p.count <= 0) return 0.0;
            auto k = static_cast<long>(std::floor(s / p.period_ps));
            if (k >= p.count) return 0.0;
            return (s - k * p.period_ps) < p.width_ps ? p.amplitude : 0.0;
          },
          [t](const Sine& s) {
            if (t < s.delay_ps) return s.offset;
            return s.offset +
                   s.amplitude * std::sin(2.0 * kPi * s.freq_ghz * 1e-3 * (t - s.delay_ps));
          },
      },
      w);
}

double integral(const Waveform& w, double t) {
  return std::visit(
      Overloaded{
          [t](const Dc& d) { return d.value * t; },
          [t](const Pulse& p) {
            double s = t - p.delay_ps;
            if (s <= 0.0) return 0.0;
            double area = 0.0;
            double r = std::min(s, p.rise_ps);
            if (p.rise_ps > 0.0) area += p.amplitude * r * r / (2.0 * p.rise_ps);
            s -= p.rise_ps;
            if (s <= 0.0) return area;
            area += p.amplitude * std::min(s, p.width_ps);
            s -= p.width_ps;
            if (s <= 0.0) return area;
            double f = std::min(s, p.fall_ps);
            if (p.fall_ps > 0.0) area += p.amplitude * (f - f * f / (2.0 * p.fall_ps));
            return area;
          },
          [t](const PulseTrain& p) {
            double s = t - p.start_ps;
            if (s <= 0.0 || p.count <= 0) return 0.0;
            auto k = static_cast<long>(std::floor(s / p.period_ps));
            if (k >= p.count) return p.amplitude * p.count * p.width_ps;
            return p.amplitude * (k * p.width_ps + std::min(s - k * p.period_ps, p.width_ps));
          },
          [t](const Sine& s) {
            double area = s.offset * t;
            if (t <= s.delay_ps) return area;
            if (s.freq_ghz == 0.0) return area;
            double omega = 2.0 * kPi * s.freq_ghz * 1e-3;
            return area + s.amplitude / omega * (1.0 - std::cos(omega * (t - s.delay_ps)));
          },
      },
      w);
}

double window_average(const Waveform& w, double t0, double t1) {
  if (t1 <= t0) return evaluate(w, t0);
  return (integral(w, t1) - integral(w, t0)) / (t1 - t0);
}

double amplitude_of(const Waveform& w) {
  return std::visit(Overloaded{
                        [](const Dc& d) { return d.value; },
                        [](const auto& p) { return p.amplitude; },
                    },
                    w);
}

void set_amplitude(Waveform& w, double value) {
  std::visit(Overloaded{
                 [value](Dc& d) { d.value = value; },
                 [value](auto& p) { p.amplitude = value; },
             },
             w);
}

std::string PrintRequest::label() const {
  switch (kind) {
    case TraceKind::NodeVoltage: return "v(" + target + ")";
    case TraceKind::JunctionPhase: return "phi(" + target + ")";
    case TraceKind::JunctionVoltage: return "vj(" + target + ")";
    case TraceKind::InductorCurrent: return "i(" + target + ")";
  }
  return target;
}

bool is_ground(const std::string& node) { return node == "0" || node == "gnd"; }

std::vector<std::string> Netlist::nodes() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& d : devices) {
    if (std::holds_alternative<Mutual>(d.kind)) continue;
    for (const auto* n : {&d.pos, &d.neg}) {
      if (!is_ground(*n) && seen.insert(*n).second) out.push_back(*n);
    }
  }
  return out;
}

const Device* Netlist::find(const std::string& name) const {
  for (const auto& d : devices) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

Device* Netlist::find(const std::string& name) {
  return const_cast<Device*>(std::as_const(*this).find(name));
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Selector {
  std::string device;
  std::string field;
};

Selector split_selector(const std::string& selector) {
  auto s = lower(selector);
  auto dot = s.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) {
    throw InputError("bad selector '" + selector + "': expected <device>.<field>");
  }
  return {s.substr(0, dot), s.substr(dot + 1)};
}

[[noreturn]] void bad_field(const std::string& selector) {
  throw InputError("selector '" + selector + "' does not name a device parameter");
}

}  // namespace

double Netlist::get(const std::string& selector) const {
  auto [dev, field] = split_selector(selector);
  const Device* d = find(dev);
  if (!d) throw InputError("selector '" + selector + "': no device named '" + dev + "'");
  return std::visit(Overloaded{
                        [&](const Junction& j) {
                          if (field == "ic") return j.ic;
                          if (field == "rn") return j.rn;
                          if (field == "cap") return j.cap;
                          bad_field(selector);
                        },
                        [&](const Inductor& l) {
                          if (field == "l") return l.l;
                          bad_field(selector);
                        },
                        [&](const Resistor& r) {
                          if (field == "r") return r.r;
                          bad_field(selector);
                        },
                        [&](const Capacitor& c) {
                          if (field == "c") return c.c;
                          bad_field(selector);
                        },
                        [&](const Mutual& m) {
                          if (field == "m") return m.m;
                          bad_field(selector);
                        },
                        [&](const auto& src) {
                          if (field == "amp" || field == "dc") return amplitude_of(src.waveform);
                          bad_field(selector);
                        },
                    },
                    d->kind);
}

void Netlist::set(const std::string& selector, double value) {
  auto [dev, field] = split_selector(selector);
  Device* d = find(dev);
  if (!d) throw InputError("selector '" + selector + "': no device named '" + dev + "'");
  std::visit(Overloaded{
                 [&](Junction& j) {
                   // Changing ic scales the junction area: IcRn and beta_c are kept.
                   if (field == "ic") {
                     double ratio = value / j.ic;
                     j.ic = value;
                     j.rn /= ratio;
                     j.cap *= ratio;
                   } else if (field == "rn") {
                     j.rn = value;
                   } else if (field == "cap") {
                     j.cap = value;
                   } else {
                     bad_field(selector);
                   }
                 },
                 [&](Inductor& l) { field == "l" ? void(l.l = value) : bad_field(selector); },
                 [&](Resistor& r) { field == "r" ? void(r.r = value) : bad_field(selector); },
                 [&](Capacitor& c) { field == "c" ? void(c.c = value) : bad_field(selector); },
                 [&](Mutual& m) { field == "m" ? void(m.m = value) : bad_field(selector); },
                 [&](auto& src) {
                   (field == "amp" || field == "dc") ? set_amplitude(src.waveform, value)
                                                     : bad_field(selector);
                 },
             },
             d->kind);
}

void Netlist::validate() const {
  if (devices.empty()) throw InputError("netlist has no devices");
  std::unordered_map<std::string, double> inductors;
  std::unordered_set<std::string> names;
  for (const auto& d : devices) {
    if (!names.insert(d.name).second) throw InputError("duplicate device name '" + d.name + "'");
    if (const auto* l = std::get_if<Inductor>(&d.kind)) inductors[d.name] = l->l;
  }
  auto positive = [](const Device& d, double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError(d.name + ": " + what + " must be positive");
    }
  };
  for (const auto& d : devices) {
    std::visit(Overloaded{
                   [&](const Junction& j) {
                     positive(d, j.ic, "ic");
                     positive(d, j.rn, "rn");
                     if (j.cap < 0.0) throw InputError(d.name + ": cap must be non-negative");
                   },
                   [&](const Inductor& l) { positive(d, l.l, "inductance"); },
                   [&](const Resistor& r) { positive(d, r.r, "resistance"); },
                   [&](const Capacitor& c) { positive(d, c.c, "capacitance"); },
                   [&](const Mutual& m) {
                     auto a = inductors.find(m.l1);
                     auto b = inductors.find(m.l2);
                     if (a == inductors.end() || b == inductors.end()) {
                       throw InputError(d.name + ": mutual coupling references unknown inductor '" +
                                        (a == inductors.end() ? m.l1 : m.l2) + "'");
                     }
                     if (m.l1 == m.l2) throw InputError(d.name + ": mutual couples an inductor to itself");
                     if (std::abs(m.m) > std::sqrt(a->second * b->second)) {
                       throw InputError(d.name + ": |m| exceeds sqrt(l1*l2)");
                     }
                   },
                   [&](const auto&) {},
               },
               d.kind);
  }
  for (const auto& p : prints) {
    if (p.kind == TraceKind::NodeVoltage) {
      if (is_ground(p.target)) continue;
      auto ns = nodes();
      if (std::find(ns.begin(), ns.end(), p.target) == ns.end()) {
        throw InputError("print request references unknown node '" + p.target + "'");
      }
      continue;
    }
    const Device* d = find(p.target);
    bool ok = d && (p.kind == TraceKind::InductorCurrent ? std::holds_alternative<Inductor>(d->kind)
                                                         : std::holds_alternative<Junction>(d->kind));
    if (!ok) throw InputError("print request " + p.label() + " references no matching device");
  }
}

}  // namespace fluxon::circuit
