#include "tapsim/formats.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include "tapsim/text_format.hpp"

namespace tapsim::io {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

bool parse_bool(std::string_view s, bool& out) {
  s = trim(s);
  if (s == "1" || s == "true") {
    out = true;
    return true;
  }
  if (s == "0" || s == "false") {
    out = false;
    return true;
  }
  return false;
}

std::string object_field(const std::optional<int>& id) { return id ? std::to_string(*id) : std::string(); }

}  // namespace

TraceError::TraceError(std::size_t row, const std::string& message)
    : InvalidArgument("trace row " + std::to_string(row) + ": " + message), row_(row) {}

std::vector<tap::FingerState> read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  bool header = false;
  std::vector<tap::FingerState> trace;
  while (std::getline(in, line)) {
    ++row;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!header) {
      if (text != "t_s,x_mm,y_mm,down") throw TraceError(row, "expected header 't_s,x_mm,y_mm,down'");
      header = true;
      continue;
    }
    const auto cols = split(text, ',');
    if (cols.size() != 4) throw TraceError(row, "expected 4 columns, got " + std::to_string(cols.size()));
    tap::FingerState s;
    double x = 0.0, y = 0.0;
    if (!parse_double(cols[0], s.t)) throw TraceError(row, "bad t_s '" + std::string(cols[0]) + "'");
    if (!parse_double(cols[1], x)) throw TraceError(row, "bad x_mm '" + std::string(cols[1]) + "'");
    if (!parse_double(cols[2], y)) throw TraceError(row, "bad y_mm '" + std::string(cols[2]) + "'");
    if (!parse_bool(cols[3], s.down)) throw TraceError(row, "bad down '" + std::string(cols[3]) + "'");
    s.position = tap::Vec2(x * 1e-3, y * 1e-3);
    if (!trace.empty() && !(s.t > trace.back().t)) throw TraceError(row, "timestamps must be strictly increasing");
    trace.push_back(s);
  }
  if (trace.empty()) throw EmptyTrace();
  return trace;
}

void write_trace_csv(std::ostream& out, std::span<const tap::FingerState> trace) {
  out << "t_s,x_mm,y_mm,down\n";
  for (const auto& s : trace) {
    out << format_g9(s.t) << ',' << format_g9(s.position.x() * 1e3) << ',' << format_g9(s.position.y() * 1e3) << ','
        << (s.down ? 1 : 0) << '\n';
  }
}

void write_frames_csv(std::ostream& out, std::span<const tap::FrameRecord> frames, double z_panel) {
  out << "t_s,phase,object_id,amplitude,anchor_x_mm,anchor_y_mm,offset_u_mm,offset_v_mm,focus_x_mm,focus_y_mm,"
         "focus_z_mm\n";
  for (const auto& f : frames) {
    const auto focus = panel_to_world(f.anchor + f.sample.focus_offset, z_panel);
    out << format_g9(f.t) << ',' << tap::to_string(f.phase) << ',' << object_field(f.object_id) << ','
        << format_g9(f.sample.amplitude_scale) << ',' << format_g9(f.anchor.x() * 1e3) << ','
        << format_g9(f.anchor.y() * 1e3) << ',' << format_g9(f.sample.focus_offset.x() * 1e3) << ','
        << format_g9(f.sample.focus_offset.y() * 1e3) << ',' << format_g9(focus.x() * 1e3) << ','
        << format_g9(focus.y() * 1e3) << ',' << format_g9(focus.z() * 1e3) << '\n';
  }
}

void write_phase_log_csv(std::ostream& out, std::span<const tap::PhaseTransition> log) {
  out << "t_s,from,to,object_id\n";
  for (const auto& tr : log) {
    out << format_g9(tr.t) << ',' << tap::to_string(tr.from) << ',' << tap::to_string(tr.to) << ','
        << object_field(tr.object_id) << '\n';
  }
}

std::vector<tap::PhaseTransition> read_phase_log_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  std::vector<tap::PhaseTransition> log;
  while (std::getline(in, line)) {
    ++row;
    const auto text = trim(line);
    if (text.empty() || row == 1) continue;
    const auto cols = split(text, ',');
    if (cols.size() != 4) throw InvalidArgument("phase log row " + std::to_string(row) + ": expected 4 columns");
    tap::PhaseTransition tr;
    if (!parse_double(cols[0], tr.t)) throw InvalidArgument("phase log row " + std::to_string(row) + ": bad t_s");
    tr.from = tap::parse_phase(trim(cols[1]));
    tr.to = tap::parse_phase(trim(cols[2]));
    if (!trim(cols[3]).empty()) {
      double id = 0.0;
      if (!parse_double(cols[3], id)) throw InvalidArgument("phase log row " + std::to_string(row) + ": bad object_id");
      tr.object_id = static_cast<int>(id);
    }
    log.push_back(tr);
  }
  return log;
}

void write_drive_frames_csv(std::ostream& out, std::span<const DriveFrame> frames, int phase_bits) {
  const std::size_t n = frames.empty() ? 0 : frames.front().drive.size();
  out << "t_s,amplitude,focus_x_mm,focus_y_mm,focus_z_mm";
  for (std::size_t i = 0; i < n; ++i) out << ",phase_" << i;
  out << '\n';
  const double step = phase_bits > 0 ? field::kTwoPi / static_cast<double>(1L << phase_bits) : 1.0;
  for (const auto& f : frames) {
    out << format_g9(f.t) << ',' << format_g9(f.amplitude) << ',' << format_g9(f.focus.x() * 1e3) << ','
        << format_g9(f.focus.y() * 1e3) << ',' << format_g9(f.focus.z() * 1e3);
    for (double ph : f.drive.phases) {
      if (phase_bits > 0) {
        out << ',' << std::lround(ph / step);
      } else {
        out << ',' << format_g9(ph);
      }
    }
    out << '\n';
  }
}

}  // namespace tapsim::io
