#include "fluxon/core/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fluxon/core/error.hpp"

namespace fluxon {

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_event_log(std::ostream& out, std::vector<PulseEvent> events) {
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.time_ps != b.time_ps) return a.time_ps < b.time_ps;
    return a.node < b.node;
  });
  out << "time_ps,node\n";
  for (const auto& e : events) {
    out << format_number(e.time_ps) << ',' << e.node << '\n';
  }
}

std::string format_event_log(std::vector<PulseEvent> events) {
  std::ostringstream os;
  write_event_log(os, std::move(events));
  return os.str();
}

std::vector<PulseEvent> read_event_log(std::istream& in) {
  std::vector<PulseEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "time_ps,node") {
        throw InputError("event log line 1: expected header 'time_ps,node'");
      }
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos || comma + 1 >= line.size()) {
      throw InputError("event log line " + std::to_string(line_no) + ": expected 'time_ps,node'");
    }
    double t = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + comma, t);
    if (ec != std::errc() || ptr != line.data() + comma || t < 0.0) {
      throw InputError("event log line " + std::to_string(line_no) + ": bad time");
    }
    events.push_back({t, line.substr(comma + 1)});
  }
  return events;
}

std::vector<PulseEvent> parse_event_log(const std::string& text) {
  std::istringstream is(text);
  return read_event_log(is);
}

std::vector<SpikeTrain> group_by_node(std::span<const PulseEvent> events) {
  std::map<std::string, std::vector<double>> by_node;
  for (const auto& e : events) by_node[e.node].push_back(e.time_ps);
  std::vector<SpikeTrain> out;
  out.reserve(by_node.size());
  for (auto& [node, times] : by_node) out.emplace_back(node, std::move(times));
  return out;
}

}  // namespace fluxon
