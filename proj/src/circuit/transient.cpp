#include "fluxon/circuit/transient.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <spdlog/spdlog.h>
#include <sstream>
#include <unordered_map>

#include "fluxon/core/constants.hpp"
#include "fluxon/core/event_log.hpp"

namespace fluxon::circuit {

const std::vector<double>& TraceSet::trace(const PrintRequest& request) const {
  const std::map<std::string, std::vector<double>>* table = nullptr;
  switch (request.kind) {
    case TraceKind::NodeVoltage: table = &node_voltage; break;
    case TraceKind::JunctionPhase: table = &junction_phase; break;
    case TraceKind::JunctionVoltage: table = &junction_voltage; break;
    case TraceKind::InductorCurrent: table = &inductor_current; break;
  }
  auto it = table->find(request.target);
  if (it == table->end()) throw InputError("no trace for " + request.label());
  return it->second;
}

namespace {

constexpr double kMaxStepPs = 0.1;
constexpr double kAbsTol = 1e-13;

struct JunctionStamp {
  std::string name;
  int a, b;
  double ic, g_linear, two_c_over_h;
};

struct CapacitorStamp {
  int a, b;
  double two_c_over_h;
};

struct InductorStamp {
  std::string name;
  int a, b, row;
};

struct ResistorStamp {
  int a, b;
  double g;
};

struct SourceStamp {
  int a, b, row;  // row only used by voltage sources
  const Waveform* waveform;
};

class Solver {
 public:
  Solver(const Netlist& net, const TransientOptions& opt) : opt_(opt) {
    h_ = opt.step_ps * kPicosecond;
    phase_gain_ = kPi * h_ / kPhi0;

    node_names_ = net.nodes();
    std::unordered_map<std::string, int> node_index;
    for (std::size_t i = 0; i < node_names_.size(); ++i) node_index[node_names_[i]] = static_cast<int>(i);
    auto idx = [&](const std::string& n) { return is_ground(n) ? -1 : node_index.at(n); };

    int next_row = static_cast<int>(node_names_.size());
    std::unordered_map<std::string, int> inductor_slot;
    std::vector<double> self_l;
    for (const auto& d : net.devices) {
      if (const auto* l = std::get_if<Inductor>(&d.kind)) {
        inductor_slot[d.name] = static_cast<int>(inductors_.size());
        inductors_.push_back({d.name, idx(d.pos), idx(d.neg), -1});
        self_l.push_back(l->l);
      }
    }
    for (const auto& d : net.devices) {
      if (const auto* v = std::get_if<VoltageSource>(&d.kind)) {
        vsources_.push_back({idx(d.pos), idx(d.neg), next_row++, &v->waveform});
      }
    }
    dim_ = next_row;

    auto nl = static_cast<Eigen::Index>(inductors_.size());
    Eigen::MatrixXd lmat = Eigen::MatrixXd::Zero(nl, nl);
    for (Eigen::Index i = 0; i < nl; ++i) lmat(i, i) = self_l[static_cast<std::size_t>(i)];

    base_ = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const auto& d : net.devices) {
      int a = idx_or_none(d, 0, idx);
      int b = idx_or_none(d, 1, idx);
      if (const auto* j = std::get_if<Junction>(&d.kind)) {
        double tch = 2.0 * j->cap / h_;
        junctions_.push_back({d.name, a, b, j->ic, 1.0 / j->rn + tch, tch});
        stamp_conductance(base_, a, b, 1.0 / j->rn + tch);
      } else if (const auto* r = std::get_if<Resistor>(&d.kind)) {
        resistors_.push_back({a, b, 1.0 / r->r});
        stamp_conductance(base_, a, b, 1.0 / r->r);
      } else if (const auto* c = std::get_if<Capacitor>(&d.kind)) {
        double tch = 2.0 * c->c / h_;
        capacitors_.push_back({a, b, tch});
        stamp_conductance(base_, a, b, tch);
      } else if (const auto* m = std::get_if<Mutual>(&d.kind)) {
        int p = inductor_slot.at(m->l1);
        int q = inductor_slot.at(m->l2);
        lmat(p, q) += m->m;
        lmat(q, p) += m->m;
      } else if (const auto* s = std::get_if<CurrentSource>(&d.kind)) {
        isources_.push_back({a, b, -1, &s->waveform});
      }
    }

    // Trapezoidal inductor companion: i(n+1) = i(n) + h/2 * L^-1 (v(n+1) + v(n)).
    if (nl > 0) {
      Eigen::FullPivLU<Eigen::MatrixXd> llu(lmat);
      if (!llu.isInvertible()) throw StructuralError("inductance matrix is singular (unit coupling)");
      gamma_ = 0.5 * h_ * llu.inverse();
      for (Eigen::Index m = 0; m < nl; ++m) {
        const auto& im = inductors_[static_cast<std::size_t>(m)];
        for (Eigen::Index k = 0; k < nl; ++k) {
          const auto& ik = inductors_[static_cast<std::size_t>(k)];
          double g = gamma_(m, k);
          if (g == 0.0) continue;
          if (im.a >= 0 && ik.a >= 0) base_(im.a, ik.a) += g;
          if (im.a >= 0 && ik.b >= 0) base_(im.a, ik.b) -= g;
          if (im.b >= 0 && ik.a >= 0) base_(im.b, ik.a) -= g;
          if (im.b >= 0 && ik.b >= 0) base_(im.b, ik.b) += g;
        }
      }
    }
    for (const auto& v : vsources_) {
      if (v.a >= 0) {
        base_(v.a, v.row) += 1.0;
        base_(v.row, v.a) += 1.0;
      }
      if (v.b >= 0) {
        base_(v.b, v.row) -= 1.0;
        base_(v.row, v.b) -= 1.0;
      }
    }

    x_ = Eigen::VectorXd::Zero(dim_);
    il_ = Eigen::VectorXd::Zero(nl);
    vl_ = Eigen::VectorXd::Zero(nl);
    for (const auto& [name, current] : opt.initial_current) {
      auto it = inductor_slot.find(name);
      if (it == inductor_slot.end()) {
        throw InputError("initial current given for unknown inductor '" + name + "'");
      }
      il_(it->second) = current;
    }
    phi_.assign(junctions_.size(), 0.0);
    vj_.assign(junctions_.size(), 0.0);
    icap_j_.assign(junctions_.size(), 0.0);
    vc_.assign(capacitors_.size(), 0.0);
    icap_c_.assign(capacitors_.size(), 0.0);
  }

  TraceSet run() {
    auto steps = static_cast<std::size_t>(std::llround(opt_.stop_ps / opt_.step_ps));
    TraceSet out;
    out.step_ps = opt_.step_ps;
    out.time_ps.reserve(steps + 1);
    std::vector<std::vector<double>*> node_cols, ind_cols, phase_cols, vj_cols;
    for (const auto& n : node_names_) node_cols.push_back(&out.node_voltage[n]);
    for (const auto& l : inductors_) ind_cols.push_back(&out.inductor_current[l.name]);
    for (const auto& j : junctions_) {
      phase_cols.push_back(&out.junction_phase[j.name]);
      vj_cols.push_back(&out.junction_voltage[j.name]);
    }
    for (auto* c : node_cols) c->reserve(steps + 1);
    for (auto* c : ind_cols) c->reserve(steps + 1);
    for (auto* c : phase_cols) c->reserve(steps + 1);
    for (auto* c : vj_cols) c->reserve(steps + 1);

    auto record = [&](double t) {
      out.time_ps.push_back(t);
      for (std::size_t i = 0; i < node_cols.size(); ++i) {
        node_cols[i]->push_back(x_(static_cast<Eigen::Index>(i)));
      }
      for (std::size_t i = 0; i < ind_cols.size(); ++i) {
        ind_cols[i]->push_back(il_(static_cast<Eigen::Index>(i)));
      }
      for (std::size_t i = 0; i < phase_cols.size(); ++i) {
        phase_cols[i]->push_back(phi_[i]);
        vj_cols[i]->push_back(vj_[i]);
      }
    };

    check_structure();
    initialize();
    record(0.0);
    for (std::size_t n = 1; n <= steps; ++n) {
      double t = static_cast<double>(n) * opt_.step_ps;
      step(t);
      record(t);
    }
    return out;
  }

 private:
  template <class Idx>
  static int idx_or_none(const Device& d, int which, Idx& idx) {
    if (std::holds_alternative<Mutual>(d.kind)) return -1;
    return idx(which == 0 ? d.pos : d.neg);
  }

  static void stamp_conductance(Eigen::MatrixXd& m, int a, int b, double g) {
    if (a >= 0) m(a, a) += g;
    if (b >= 0) m(b, b) += g;
    if (a >= 0 && b >= 0) {
      m(a, b) -= g;
      m(b, a) -= g;
    }
  }

  static void inject(Eigen::VectorXd& rhs, int a, int b, double current_a_to_b) {
    if (a >= 0) rhs(a) -= current_a_to_b;
    if (b >= 0) rhs(b) += current_a_to_b;
  }

  static double branch_voltage(const Eigen::VectorXd& x, int a, int b) {
    return (a >= 0 ? x(a) : 0.0) - (b >= 0 ? x(b) : 0.0);
  }

  void check_structure() {
    Eigen::MatrixXd a = base_;
    for (const auto& j : junctions_) stamp_conductance(a, j.a, j.b, j.ic * phase_gain_);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() < dim_) {
      throw StructuralError("singular circuit matrix (floating node or source loop)");
    }
  }

  // Consistent state at t = 0: capacitor and junction branches hold their
  // initial (zero) voltage, inductors carry their initial currents, sources
  // take their t = 0 values. Gives the starting capacitor currents and
  // inductor voltages the trapezoidal history needs. Left at zero when the
  // reduced system is singular (e.g. a source directly across a capacitor).
  void initialize() {
    const auto n_pinned = static_cast<Eigen::Index>(capacitors_.size() + junctions_.size());
    const Eigen::Index n = dim_ + n_pinned;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (const auto& r : resistors_) stamp_conductance(m, r.a, r.b, r.g);
    Eigen::Index row = dim_;
    auto branch = [&](int a, int b, Eigen::Index r) {
      if (a >= 0) {
        m(a, r) += 1.0;
        m(r, a) += 1.0;
      }
      if (b >= 0) {
        m(b, r) -= 1.0;
        m(r, b) -= 1.0;
      }
    };
    for (const auto& v : vsources_) {
      branch(v.a, v.b, v.row);
      rhs(v.row) = evaluate(*v.waveform, 0.0);
    }
    for (const auto& s : isources_) inject(rhs, s.a, s.b, evaluate(*s.waveform, 0.0));
    for (std::size_t k = 0; k < inductors_.size(); ++k) {
      inject(rhs, inductors_[k].a, inductors_[k].b, il_(static_cast<Eigen::Index>(k)));
    }
    for (const auto& c : capacitors_) branch(c.a, c.b, row++);
    for (const auto& j : junctions_) branch(j.a, j.b, row++);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) {
      spdlog::debug("transient: inconsistent initial state, starting from zero");
      return;
    }
    Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) return;
    x_ = sol.head(dim_);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(capacitors_.size()); ++i) {
      icap_c_[static_cast<std::size_t>(i)] = sol(dim_ + i);
    }
    for (std::size_t k = 0; k < junctions_.size(); ++k) {
      icap_j_[k] = sol(dim_ + static_cast<Eigen::Index>(capacitors_.size() + k));
    }
    for (std::size_t k = 0; k < inductors_.size(); ++k) {
      vl_(static_cast<Eigen::Index>(k)) = branch_voltage(x_, inductors_[k].a, inductors_[k].b);
    }
  }

  void step(double t) {
    // Contributions that do not depend on the Newton iterate.
    Eigen::VectorXd rhs0 = Eigen::VectorXd::Zero(dim_);
    const double half = 0.5 * opt_.step_ps;
    for (const auto& s : isources_) {
      double i = window_average(*s.waveform, t - half, t + half);
      if (s.a >= 0) rhs0(s.a) -= i;
      if (s.b >= 0) rhs0(s.b) += i;
    }
    for (const auto& v : vsources_) rhs0(v.row) = window_average(*v.waveform, t - half, t + half);
    Eigen::VectorXd il_hist;
    if (!inductors_.empty()) {
      il_hist = il_ + gamma_ * vl_;
      for (std::size_t m = 0; m < inductors_.size(); ++m) {
        inject(rhs0, inductors_[m].a, inductors_[m].b, il_hist(static_cast<Eigen::Index>(m)));
      }
    }
    for (std::size_t c = 0; c < capacitors_.size(); ++c) {
      const auto& cap = capacitors_[c];
      inject(rhs0, cap.a, cap.b, -cap.two_c_over_h * vc_[c] - icap_c_[c]);
    }
    for (std::size_t k = 0; k < junctions_.size(); ++k) {
      const auto& j = junctions_[k];
      inject(rhs0, j.a, j.b, -j.two_c_over_h * vj_[k] - icap_j_[k]);
    }

    Eigen::VectorXd x = x_;
    if (junctions_.empty()) {
      lu_.compute(base_);
      x = lu_.solve(rhs0);
      if (!x.allFinite()) throw StructuralError("singular circuit matrix");
    } else {
      bool converged = false;
      for (int it = 0; it < opt_.max_newton_iterations; ++it) {
        a_ = base_;
        rhs_ = rhs0;
        for (std::size_t k = 0; k < junctions_.size(); ++k) {
          const auto& j = junctions_[k];
          double v = branch_voltage(x, j.a, j.b);
          double phi = phi_[k] + phase_gain_ * (v + vj_[k]);
          double g = j.ic * std::cos(phi) * phase_gain_;
          stamp_conductance(a_, j.a, j.b, g);
          inject(rhs_, j.a, j.b, j.ic * std::sin(phi) - g * v);
        }
        lu_.compute(a_);
        next_ = lu_.solve(rhs_);
        if (!next_.allFinite()) throw StructuralError("singular circuit matrix");
        converged = true;
        for (Eigen::Index i = 0; i < dim_; ++i) {
          if (std::abs(next_(i) - x(i)) > opt_.newton_reltol * std::abs(next_(i)) + kAbsTol) {
            converged = false;
            break;
          }
        }
        x.swap(next_);
        if (converged) break;
      }
      if (!converged) {
        std::ostringstream msg;
        msg << "Newton iteration did not converge at t = " << t << " ps";
        throw ConvergenceError(t, msg.str());
      }
    }

    for (std::size_t k = 0; k < junctions_.size(); ++k) {
      const auto& j = junctions_[k];
      double v = branch_voltage(x, j.a, j.b);
      phi_[k] += phase_gain_ * (v + vj_[k]);
      icap_j_[k] = j.two_c_over_h * (v - vj_[k]) - icap_j_[k];
      vj_[k] = v;
    }
    for (std::size_t c = 0; c < capacitors_.size(); ++c) {
      const auto& cap = capacitors_[c];
      double v = branch_voltage(x, cap.a, cap.b);
      icap_c_[c] = cap.two_c_over_h * (v - vc_[c]) - icap_c_[c];
      vc_[c] = v;
    }
    if (!inductors_.empty()) {
      for (std::size_t m = 0; m < inductors_.size(); ++m) {
        vl_(static_cast<Eigen::Index>(m)) = branch_voltage(x, inductors_[m].a, inductors_[m].b);
      }
      il_ = il_hist + gamma_ * vl_;
    }
    x_ = std::move(x);
  }

  TransientOptions opt_;
  double h_ = 0.0;
  double phase_gain_ = 0.0;
  Eigen::Index dim_ = 0;
  std::vector<std::string> node_names_;
  std::vector<JunctionStamp> junctions_;
  std::vector<CapacitorStamp> capacitors_;
  std::vector<InductorStamp> inductors_;
  std::vector<ResistorStamp> resistors_;
  std::vector<SourceStamp> vsources_;
  std::vector<SourceStamp> isources_;
  Eigen::MatrixXd gamma_;
  Eigen::MatrixXd base_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd rhs_, next_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd x_;
  Eigen::VectorXd il_, vl_;
  std::vector<double> phi_, vj_, icap_j_, vc_, icap_c_;
};

}  // namespace

TraceSet run_transient(const Netlist& netlist, const TransientOptions& options) {
  if (!(options.step_ps > 0.0) || options.step_ps > kMaxStepPs + 1e-12) {
    throw InputError("transient step must be in (0, 0.1] ps");
  }
  if (!(options.stop_ps > 0.0)) throw InputError("transient stop time must be positive");
  netlist.validate();
  Solver solver(netlist, options);
  return solver.run();
}

TraceSet run_transient(const Netlist& netlist, double stop_ps, double step_ps) {
  TransientOptions opt;
  opt.stop_ps = stop_ps;
  opt.step_ps = step_ps;
  return run_transient(netlist, opt);
}

TraceSet run_transient(const Netlist& netlist) {
  if (!netlist.tran) throw InputError("netlist has no .tran directive");
  return run_transient(netlist, netlist.tran->stop_ps, netlist.tran->step_ps);
}

std::string format_waveform_csv(const Netlist& netlist, const TraceSet& traces) {
  std::vector<PrintRequest> prints = netlist.prints;
  if (prints.empty()) {
    for (const auto& [name, _] : traces.junction_phase) prints.push_back({TraceKind::JunctionPhase, name});
  }
  std::vector<const std::vector<double>*> cols;
  std::vector<double> zeros;
  for (const auto& p : prints) {
    if (p.kind == TraceKind::NodeVoltage && is_ground(p.target)) {
      zeros.assign(traces.size(), 0.0);
      cols.push_back(&zeros);
    } else {
      cols.push_back(&traces.trace(p));
    }
  }
  std::ostringstream os;
  os << "time_ps";
  for (const auto& p : prints) os << ',' << p.label();
  os << '\n';
  for (std::size_t i = 0; i < traces.size(); ++i) {
    os << format_number(traces.time_ps[i]);
    for (const auto* c : cols) os << ',' << format_number((*c)[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace fluxon::circuit
