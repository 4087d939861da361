#include "tapsim/drive_frame.hpp"

#include <algorithm>

#include "tapsim/error.hpp"

namespace tapsim {

DriveFrame compose_drive_frame(const field::AcousticField& field, const tap::FrameRecord& frame, double z_panel,
                               int phase_bits) {
  if (phase_bits < 0 || phase_bits > 16) throw InvalidArgument("phase bits must lie in [0, 16]");
  DriveFrame out;
  out.t = frame.t;
  out.focus = panel_to_world(frame.anchor + frame.sample.focus_offset, z_panel);
  out.amplitude = std::clamp(frame.sample.amplitude_scale, 0.0, 1.0);
  if (frame.phase == tap::Phase::idle || out.amplitude == 0.0) {
    out.amplitude = 0.0;
    out.drive = field::DriveVector::uniform(field.size(), 0.0);
    return out;
  }
  out.drive = field.focus_phases(out.focus);
  if (phase_bits > 0) out.drive = field::quantize_phases(out.drive, phase_bits);
  std::fill(out.drive.amplitudes.begin(), out.drive.amplitudes.end(), out.amplitude);
  return out;
}

}  // namespace tapsim
