#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tapsim/drive_frame.hpp"
#include "tapsim/error.hpp"
#include "tapsim/tap_engine.hpp"

namespace tapsim::io {

/// A trace row that does not parse. `row` is the 1-based file line.
class TraceError : public InvalidArgument {
 public:
  TraceError(std::size_t row, const std::string& message);
  [[nodiscard]] std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// A trace file with no data rows.
class EmptyTrace : public InvalidArgument {
 public:
  EmptyTrace() : InvalidArgument("trace has no samples") {}
};

/// Reads `t_s,x_mm,y_mm,down` (header required, down as 0/1 or true/false).
std::vector<tap::FingerState> read_trace_csv(std::istream& in);
void write_trace_csv(std::ostream& out, std::span<const tap::FingerState> trace);

/// One row per control tick:
/// `t_s,phase,object_id,amplitude,anchor_x_mm,anchor_y_mm,offset_u_mm,offset_v_mm,focus_x_mm,focus_y_mm,focus_z_mm`.
void write_frames_csv(std::ostream& out, std::span<const tap::FrameRecord> frames, double z_panel);

/// `t_s,from,to,object_id`; object_id empty when absent.
void write_phase_log_csv(std::ostream& out, std::span<const tap::PhaseTransition> log);
std::vector<tap::PhaseTransition> read_phase_log_csv(std::istream& in);

/// `t_s,amplitude,focus_x_mm,focus_y_mm,focus_z_mm,phase_0..phase_{N-1}`.
/// Phases are integer levels when phase_bits > 0, radians otherwise.
void write_drive_frames_csv(std::ostream& out, std::span<const DriveFrame> frames, int phase_bits);

}  // namespace tapsim::io
