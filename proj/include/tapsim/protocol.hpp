#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "tapsim/error.hpp"
#include "tapsim/tap_engine.hpp"

namespace tapsim::io {

// Session wire messages. Each is one JSON object on one line, tagged by a
// "type" member; numeric fields in ms / mm as named.

struct FingerSample {
  double t_ms = 0.0;
  double x_mm = 0.0;
  double y_mm = 0.0;
  bool down = false;
};

struct StateUpdate {
  double t_ms = 0.0;
  tap::Phase phase = tap::Phase::idle;
  std::optional<int> object_id;
  double amplitude = 0.0;
  double offset_u_mm = 0.0;
  double offset_v_mm = 0.0;
};

struct PhaseTransitionMsg {
  double t_ms = 0.0;
  tap::Phase from = tap::Phase::idle;
  tap::Phase to = tap::Phase::idle;
  std::optional<int> object_id;
};

/// Sent once on connect so clients can draw the objects.
struct SceneInfo {
  tap::Scene scene;
  double z_panel_mm = 0.0;
  double control_rate_hz = 0.0;
  double wire_rate_hz = 0.0;
};

struct ErrorMsg {
  std::string message;
};

using Outbound = std::variant<StateUpdate, PhaseTransitionMsg, SceneInfo, ErrorMsg>;

class ProtocolError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

FingerSample parse_finger_sample(std::string_view line);
std::string encode(const FingerSample& msg);

Outbound parse_outbound(std::string_view line);
std::string encode(const Outbound& msg);

StateUpdate make_state_update(const tap::FrameRecord& frame);
PhaseTransitionMsg make_transition(const tap::PhaseTransition& tr);
tap::FingerState to_finger_state(const FingerSample& msg);

}  // namespace tapsim::io
