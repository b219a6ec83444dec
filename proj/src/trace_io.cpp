#include "oppaccess/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "oppaccess/error.hpp"

namespace oppaccess {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trace(std::ostream& out, const IdleTrace& trace, const std::vector<std::string>& comments) {
  trace.validate();
  out << kTraceHeader << '\n';
  for (const auto& c : comments) out << "# " << c << '\n';
  std::size_t next_segment = 1;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (next_segment < trace.segment_starts.size() && trace.segment_starts[next_segment] == i) {
      out << "# segment " << next_segment + 1 << " begins\n";
      ++next_segment;
    }
    out << format_double(trace.durations[i]);
    if (trace.has_states()) out << ',' << trace.states[i] + 1;
    out << '\n';
  }
}

IdleTrace read_trace(std::istream& in) {
  IdleTrace trace;
  trace.segment_starts.push_back(0);
  std::string line;
  std::size_t line_no = 0;
  int labeled = -1;  // unknown until the first data line
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (view.starts_with("# segment ") && !trace.durations.empty()) {
        trace.segment_starts.push_back(trace.size());
      }
      continue;
    }
    const auto comma = view.find(',');
    const auto dur_text = trim(view.substr(0, comma));
    double duration = 0.0;
    const auto [ptr, ec] = std::from_chars(dur_text.data(), dur_text.data() + dur_text.size(), duration);
    if (ec != std::errc() || ptr != dur_text.data() + dur_text.size()) {
      throw DataError("line " + std::to_string(line_no) + ": cannot parse duration '" +
                      std::string(dur_text) + "'");
    }
    if (!(duration > 0.0) || !std::isfinite(duration)) {
      throw DataError("line " + std::to_string(line_no) + ": duration must be positive");
    }
    const int has_state = comma == std::string_view::npos ? 0 : 1;
    if (labeled == -1) labeled = has_state;
    if (labeled != has_state) {
      throw DataError("line " + std::to_string(line_no) + ": state column present on some lines only");
    }
    trace.durations.push_back(duration);
    if (has_state) {
      const auto state_text = trim(view.substr(comma + 1));
      std::size_t state = 0;
      const auto [sp, sec] =
          std::from_chars(state_text.data(), state_text.data() + state_text.size(), state);
      if (sec != std::errc() || sp != state_text.data() + state_text.size() || state == 0) {
        throw DataError("line " + std::to_string(line_no) + ": state index must be a positive integer");
      }
      trace.states.push_back(state - 1);
    }
  }
  if (trace.durations.empty()) throw DataError("trace contains no cycles");
  return trace;
}

IdleTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace file " + path);
  return read_trace(in);
}

}  // namespace oppaccess
