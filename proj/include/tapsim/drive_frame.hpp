#pragma once

#include "tapsim/field.hpp"
#include "tapsim/tap_engine.hpp"

namespace tapsim {

/// One control-tick device command.
struct DriveFrame {
  double t = 0.0;
  field::Vec3 focus = field::Vec3::Zero();
  double amplitude = 0.0;
  field::DriveVector drive;
};

/// The interaction panel is the plane z = z_panel above the array.
inline field::Vec3 panel_to_world(const tap::Vec2& p, double z_panel) {
  return {p.x(), p.y(), z_panel};
}

/// Focuses the array at anchor + offset on the panel plane and scales every
/// element by the frame amplitude. phase_bits == 0 keeps continuous phases.
/// IDLE frames come out with all amplitudes and phases zero.
DriveFrame compose_drive_frame(const field::AcousticField& field, const tap::FrameRecord& frame, double z_panel,
                               int phase_bits);

}  // namespace tapsim
