#include "tapsim/protocol.hpp"

#include <cmath>

#include "json.hpp"

namespace tapsim::io {
namespace {

using nlohmann::json;

json parse_object(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) throw ProtocolError("message lacks a string \"type\"");
  return j;
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw ProtocolError(std::string("field \"") + key + "\" must be a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) throw ProtocolError(std::string("field \"") + key + "\" must be finite");
  return v;
}

tap::Phase phase(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw ProtocolError(std::string("field \"") + key + "\" must be a phase");
  try {
    return tap::parse_phase(j[key].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ProtocolError(e.what());
  }
}

std::optional<int> object_id(const json& j) {
  if (!j.contains("object_id") || j["object_id"].is_null()) return std::nullopt;
  if (!j["object_id"].is_number_integer()) throw ProtocolError("field \"object_id\" must be an integer or null");
  return j["object_id"].get<int>();
}

json id_json(const std::optional<int>& id) { return id ? json(*id) : json(nullptr); }

Outbound parse_outbound_fields(const json& j);

}  // namespace

FingerSample parse_finger_sample(std::string_view line) {
  const json j = parse_object(line);
  if (j["type"] != "FingerSample") {
    throw ProtocolError("unexpected message type \"" + j["type"].get<std::string>() + "\"");
  }
  FingerSample s;
  s.t_ms = number(j, "t_ms");
  s.x_mm = number(j, "x_mm");
  s.y_mm = number(j, "y_mm");
  if (!j.contains("down") || !j["down"].is_boolean()) throw ProtocolError("field \"down\" must be a boolean");
  s.down = j["down"].get<bool>();
  return s;
}

std::string encode(const FingerSample& msg) {
  json j = {{"type", "FingerSample"}, {"t_ms", msg.t_ms}, {"x_mm", msg.x_mm}, {"y_mm", msg.y_mm}, {"down", msg.down}};
  return j.dump();
}

std::string encode(const Outbound& msg) {
  json j = std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, StateUpdate>) {
          return {{"type", "StateUpdate"},
                  {"t_ms", m.t_ms},
                  {"phase", tap::to_string(m.phase)},
                  {"object_id", id_json(m.object_id)},
                  {"amplitude", m.amplitude},
                  {"offset_u_mm", m.offset_u_mm},
                  {"offset_v_mm", m.offset_v_mm}};
        } else if constexpr (std::is_same_v<M, PhaseTransitionMsg>) {
          return {{"type", "PhaseTransition"},
                  {"t_ms", m.t_ms},
                  {"from", tap::to_string(m.from)},
                  {"to", tap::to_string(m.to)},
                  {"object_id", id_json(m.object_id)}};
        } else if constexpr (std::is_same_v<M, SceneInfo>) {
          json objects = json::array();
          for (const auto& o : m.scene) {
            objects.push_back({{"id", o.id},
                               {"rect_mm",
                                {o.region.x_min * 1e3, o.region.y_min * 1e3, o.region.x_max * 1e3, o.region.y_max * 1e3}},
                               {"color", tap::to_string(o.color)},
                               {"material", tap::to_string(o.material)}});
          }
          return {{"type", "Scene"},
                  {"objects", objects},
                  {"z_panel_mm", m.z_panel_mm},
                  {"control_rate_hz", m.control_rate_hz},
                  {"wire_rate_hz", m.wire_rate_hz}};
        } else {
          return {{"type", "Error"}, {"message", m.message}};
        }
      },
      msg);
  return j.dump();
}

Outbound parse_outbound(std::string_view line) {
  const json j = parse_object(line);
  try {
    return parse_outbound_fields(j);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  } catch (const ProtocolError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ProtocolError(e.what());
  }
}

namespace {

Outbound parse_outbound_fields(const json& j) {
  const auto type = j["type"].get<std::string>();
  if (type == "StateUpdate") {
    StateUpdate m;
    m.t_ms = number(j, "t_ms");
    m.phase = phase(j, "phase");
    m.object_id = object_id(j);
    m.amplitude = number(j, "amplitude");
    m.offset_u_mm = number(j, "offset_u_mm");
    m.offset_v_mm = number(j, "offset_v_mm");
    return m;
  }
  if (type == "PhaseTransition") {
    PhaseTransitionMsg m;
    m.t_ms = number(j, "t_ms");
    m.from = phase(j, "from");
    m.to = phase(j, "to");
    m.object_id = object_id(j);
    return m;
  }
  if (type == "Scene") {
    SceneInfo m;
    m.z_panel_mm = number(j, "z_panel_mm");
    m.control_rate_hz = number(j, "control_rate_hz");
    m.wire_rate_hz = number(j, "wire_rate_hz");
    if (!j.contains("objects") || !j["objects"].is_array()) throw ProtocolError("field \"objects\" must be an array");
    for (const auto& o : j["objects"]) {
      tap::VirtualObject obj;
      if (!o.contains("id") || !o["id"].is_number_integer()) throw ProtocolError("object lacks an integer id");
      obj.id = o["id"].get<int>();
      const auto& r = o.at("rect_mm");
      obj.region = tap::Rect{r.at(0).get<double>() * 1e-3, r.at(1).get<double>() * 1e-3, r.at(2).get<double>() * 1e-3,
                             r.at(3).get<double>() * 1e-3};
      obj.color = tap::parse_color(o.at("color").get<std::string>());
      obj.material = tap::parse_material(o.at("material").get<std::string>());
      m.scene.push_back(obj);
    }
    return m;
  }
  if (type == "Error") {
    if (!j.contains("message") || !j["message"].is_string()) throw ProtocolError("field \"message\" must be a string");
    return ErrorMsg{j["message"].get<std::string>()};
  }
  throw ProtocolError("unknown message type \"" + type + "\"");
}

}  // namespace

StateUpdate make_state_update(const tap::FrameRecord& frame) {
  StateUpdate m;
  m.t_ms = frame.t * 1e3;
  m.phase = frame.phase;
  m.object_id = frame.object_id;
  m.amplitude = frame.sample.amplitude_scale;
  m.offset_u_mm = frame.sample.focus_offset.x() * 1e3;
  m.offset_v_mm = frame.sample.focus_offset.y() * 1e3;
  return m;
}

PhaseTransitionMsg make_transition(const tap::PhaseTransition& tr) {
  return {tr.t * 1e3, tr.from, tr.to, tr.object_id};
}

tap::FingerState to_finger_state(const FingerSample& msg) {
  return tap::FingerState{tap::Vec2(msg.x_mm * 1e-3, msg.y_mm * 1e-3), msg.down, msg.t_ms / 1e3};
}

}  // namespace tapsim::io
