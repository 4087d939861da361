#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tapsim/modulation.hpp"

namespace tapsim::tap {

using modulation::DriveSample;
using modulation::Vec2;

enum class Material { am_balloon, lm_cymbal };
enum class DisplayColor { red, yellow };
enum class Phase { idle, attenuation, stationary };

std::string_view to_string(Material m);
std::string_view to_string(DisplayColor c);
std::string_view to_string(Phase p);
Material parse_material(std::string_view text);
DisplayColor parse_color(std::string_view text);
Phase parse_phase(std::string_view text);

/// Closed axis-aligned rectangle in panel coordinates (m).
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  [[nodiscard]] bool contains(const Vec2& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
  [[nodiscard]] double area() const { return (x_max - x_min) * (y_max - y_min); }
};

struct VirtualObject {
  int id = 0;
  Rect region;
  Material material = Material::am_balloon;
  DisplayColor color = DisplayColor::red;

  void validate() const;
};

using Scene = std::vector<VirtualObject>;

/// Each object valid, ids unique.
void validate_scene(std::span<const VirtualObject> scene);

/// Red balloon (id 1) left of center, yellow cymbal (id 2) right of center.
Scene default_scene();

/// Stimulus parameters per material plus the shared stationary profile.
struct MaterialProfiles {
  modulation::AmTapParams balloon;
  modulation::LmTapParams cymbal;
  modulation::StationaryLmParams stationary;

  [[nodiscard]] double attenuation_time(Material m) const;
  void validate() const;
};

struct FingerState {
  Vec2 position = Vec2::Zero();  // m, panel frame
  bool down = false;
  double t = 0.0;                // s
};

struct Contact {
  int object_id = 0;
  Vec2 point = Vec2::Zero();
};

/// Object under a down finger; overlapping regions resolve to the lowest id.
std::optional<Contact> detect_contact(const FingerState& finger, std::span<const VirtualObject> scene);

struct PhaseTransition {
  double t = 0.0;
  Phase from = Phase::idle;
  Phase to = Phase::idle;
  std::optional<int> object_id;

  bool operator==(const PhaseTransition&) const = default;
};

enum class AnchorMode { frozen, follow };

struct SessionOptions {
  AnchorMode anchor_mode = AnchorMode::frozen;
  double min_gap = 0.0;  // s between release and the next accepted contact
};

struct ActiveDrive {
  DriveSample sample;
  Vec2 anchor = Vec2::Zero();
};

/// Contact-driven stimulus state machine:
///   IDLE --contact--> ATTENUATION --t_att elapsed--> STATIONARY
/// and any phase drops back to IDLE when the finger lifts or leaves the
/// active object. Phase changes happen only in advance().
class TapSession {
 public:
  explicit TapSession(MaterialProfiles profiles = {}, SessionOptions options = {});

  /// Replaces the finger state. Timestamps may repeat but not regress.
  void ingest_pointer(const FingerState& sample);

  void advance(std::span<const VirtualObject> scene, double now);

  /// Stimulus at time t for the current phase, or nothing while IDLE.
  [[nodiscard]] std::optional<ActiveDrive> drive_for(double t) const;

  [[nodiscard]] Phase phase() const { return phase_; }
  [[nodiscard]] std::optional<int> active_object() const { return active_object_; }
  [[nodiscard]] Material active_material() const { return active_material_; }
  [[nodiscard]] double phase_entry_time() const { return phase_entry_time_; }
  [[nodiscard]] const Vec2& contact_anchor() const { return contact_anchor_; }
  [[nodiscard]] const FingerState& finger() const { return finger_; }
  [[nodiscard]] const std::vector<PhaseTransition>& log() const { return log_; }
  [[nodiscard]] const MaterialProfiles& profiles() const { return profiles_; }

 private:
  void enter(Phase to, double now, std::optional<int> object_id);
  void try_start(const std::optional<Contact>& contact, std::span<const VirtualObject> scene, double now);

  MaterialProfiles profiles_;
  SessionOptions options_;
  FingerState finger_;
  bool has_finger_ = false;
  Phase phase_ = Phase::idle;
  std::optional<int> active_object_;
  Material active_material_ = Material::am_balloon;
  double phase_entry_time_ = 0.0;
  Vec2 contact_anchor_ = Vec2::Zero();
  std::optional<double> last_advance_;
  std::optional<double> released_at_;
  std::vector<PhaseTransition> log_;
};

/// What one control tick produced.
struct FrameRecord {
  double t = 0.0;
  Phase phase = Phase::idle;
  std::optional<int> object_id;
  Vec2 anchor = Vec2::Zero();
  DriveSample sample;  // zero amplitude while IDLE
};

/// advance() then drive_for() at `now`.
FrameRecord step_frame(TapSession& session, std::span<const VirtualObject> scene, double now);

struct ReplayResult {
  modulation::FrameSeries series;
  std::vector<FrameRecord> frames;
  std::vector<PhaseTransition> log;
};

/// Replays a finger trace at a fixed frame rate with zero-order hold. Frame n
/// is at t_first + n / rate; there are floor((t_last - t_first) * rate)
/// frames (at least one).
ReplayResult render_trace(std::span<const FingerState> trace, std::span<const VirtualObject> scene, double rate,
                          const MaterialProfiles& profiles = {}, const SessionOptions& options = {});

}  // namespace tapsim::tap
