#include "tapsim/tap_engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "tapsim/error.hpp"

namespace tapsim::tap {
namespace {

// Absorbs rounding in now - entry when tick times are built as t0 + n / rate.
constexpr double kTimeSlack = 1e-9;

}  // namespace

std::string_view to_string(Material m) {
  return m == Material::am_balloon ? "AM_BALLOON" : "LM_CYMBAL";
}

std::string_view to_string(DisplayColor c) {
  return c == DisplayColor::red ? "RED" : "YELLOW";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::idle: return "IDLE";
    case Phase::attenuation: return "ATTENUATION";
    case Phase::stationary: return "STATIONARY";
  }
  return "IDLE";
}

Material parse_material(std::string_view text) {
  if (text == "AM_BALLOON") return Material::am_balloon;
  if (text == "LM_CYMBAL") return Material::lm_cymbal;
  throw InvalidArgument("unknown material '" + std::string(text) + "' (expected AM_BALLOON or LM_CYMBAL)");
}

DisplayColor parse_color(std::string_view text) {
  if (text == "RED" || text == "red") return DisplayColor::red;
  if (text == "YELLOW" || text == "yellow") return DisplayColor::yellow;
  throw InvalidArgument("unknown color '" + std::string(text) + "' (expected RED or YELLOW)");
}

Phase parse_phase(std::string_view text) {
  if (text == "IDLE") return Phase::idle;
  if (text == "ATTENUATION") return Phase::attenuation;
  if (text == "STATIONARY") return Phase::stationary;
  throw InvalidArgument("unknown phase '" + std::string(text) + "'");
}

void VirtualObject::validate() const {
  const auto& r = region;
  if (!(r.x_max > r.x_min && r.y_max > r.y_min)) {
    throw InvalidArgument("object " + std::to_string(id) + " region has no area");
  }
  const bool paired = (color == DisplayColor::red && material == Material::am_balloon) ||
                      (color == DisplayColor::yellow && material == Material::lm_cymbal);
  if (!paired) {
    throw InvalidArgument("object " + std::to_string(id) + ": RED pairs with AM_BALLOON and YELLOW with LM_CYMBAL");
  }
}

void validate_scene(std::span<const VirtualObject> scene) {
  std::set<int> ids;
  for (const auto& obj : scene) {
    obj.validate();
    if (!ids.insert(obj.id).second) {
      throw InvalidArgument("duplicate object id " + std::to_string(obj.id));
    }
  }
}

Scene default_scene() {
  return {
      VirtualObject{1, Rect{-0.120, -0.040, -0.040, 0.040}, Material::am_balloon, DisplayColor::red},
      VirtualObject{2, Rect{0.040, -0.040, 0.120, 0.040}, Material::lm_cymbal, DisplayColor::yellow},
  };
}

double MaterialProfiles::attenuation_time(Material m) const {
  return m == Material::am_balloon ? balloon.t_att : cymbal.t_att;
}

void MaterialProfiles::validate() const {
  balloon.validate();
  cymbal.validate();
}

std::optional<Contact> detect_contact(const FingerState& finger, std::span<const VirtualObject> scene) {
  if (!finger.down) return std::nullopt;
  const VirtualObject* hit = nullptr;
  for (const auto& obj : scene) {
    if (obj.region.contains(finger.position) && (hit == nullptr || obj.id < hit->id)) {
      hit = &obj;
    }
  }
  if (hit == nullptr) return std::nullopt;
  return Contact{hit->id, finger.position};
}

TapSession::TapSession(MaterialProfiles profiles, SessionOptions options)
    : profiles_(std::move(profiles)), options_(options) {
  profiles_.validate();
  if (!(options_.min_gap >= 0.0)) throw InvalidArgument("min_gap must be >= 0");
}

void TapSession::ingest_pointer(const FingerState& sample) {
  if (!std::isfinite(sample.t) || !sample.position.allFinite()) {
    throw InvalidArgument("finger sample has non-finite fields");
  }
  if (has_finger_ && sample.t < finger_.t) {
    throw InvalidArgument("finger sample time " + std::to_string(sample.t) + " s precedes previous " +
                          std::to_string(finger_.t) + " s");
  }
  finger_ = sample;
  has_finger_ = true;
}

void TapSession::enter(Phase to, double now, std::optional<int> object_id) {
  log_.push_back({now, phase_, to, object_id});
  phase_ = to;
  phase_entry_time_ = now;
}

void TapSession::try_start(const std::optional<Contact>& contact, std::span<const VirtualObject> scene,
                           double now) {
  if (!contact) return;
  if (released_at_ && now - *released_at_ < options_.min_gap - kTimeSlack) return;
  const auto it = std::find_if(scene.begin(), scene.end(),
                               [&](const VirtualObject& o) { return o.id == contact->object_id; });
  active_object_ = contact->object_id;
  active_material_ = it->material;
  contact_anchor_ = contact->point;
  enter(Phase::attenuation, now, active_object_);
}

void TapSession::advance(std::span<const VirtualObject> scene, double now) {
  if (!std::isfinite(now)) throw InvalidArgument("advance time must be finite");
  if (last_advance_ && now < *last_advance_) {
    throw InvalidArgument("advance time " + std::to_string(now) + " s precedes previous " +
                          std::to_string(*last_advance_) + " s");
  }
  last_advance_ = now;

  const auto contact = detect_contact(finger_, scene);
  if (phase_ == Phase::idle) {
    try_start(contact, scene, now);
    return;
  }

  const auto active = std::find_if(scene.begin(), scene.end(),
                                   [&](const VirtualObject& o) { return o.id == *active_object_; });
  const bool held = finger_.down && active != scene.end() && active->region.contains(finger_.position);
  if (!held) {
    const auto left = active_object_;
    active_object_.reset();
    enter(Phase::idle, now, left);
    released_at_ = now;
    try_start(contact, scene, now);
    return;
  }

  if (options_.anchor_mode == AnchorMode::follow) contact_anchor_ = finger_.position;

  if (phase_ == Phase::attenuation &&
      now - phase_entry_time_ >= profiles_.attenuation_time(active_material_) - kTimeSlack) {
    enter(Phase::stationary, now, active_object_);
  }
}

std::optional<ActiveDrive> TapSession::drive_for(double t) const {
  const double local = std::max(0.0, t - phase_entry_time_);
  switch (phase_) {
    case Phase::idle:
      return std::nullopt;
    case Phase::attenuation:
      if (active_material_ == Material::am_balloon) {
        return ActiveDrive{modulation::am_tap_sample(local, profiles_.balloon), contact_anchor_};
      }
      return ActiveDrive{modulation::lm_tap_sample(local, profiles_.cymbal), contact_anchor_};
    case Phase::stationary:
      return ActiveDrive{modulation::stationary_lm_sample(local, profiles_.stationary), contact_anchor_};
  }
  return std::nullopt;
}

FrameRecord step_frame(TapSession& session, std::span<const VirtualObject> scene, double now) {
  session.advance(scene, now);
  FrameRecord rec;
  rec.t = now;
  rec.phase = session.phase();
  rec.object_id = session.active_object();
  rec.anchor = session.contact_anchor();
  if (const auto drive = session.drive_for(now)) {
    rec.sample = drive->sample;
    rec.anchor = drive->anchor;
  }
  return rec;
}

ReplayResult render_trace(std::span<const FingerState> trace, std::span<const VirtualObject> scene, double rate,
                          const MaterialProfiles& profiles, const SessionOptions& options) {
  if (trace.empty()) throw InvalidArgument("trace is empty");
  if (!(rate > 0.0)) throw InvalidArgument("frame rate must be positive");
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (!(trace[i].t > trace[i - 1].t)) {
      throw InvalidArgument("trace timestamps must be strictly increasing (row " + std::to_string(i) + ")");
    }
  }
  validate_scene(scene);

  const double t_first = trace.front().t;
  const double span = trace.back().t - t_first;
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(span * rate + 1e-9)));

  ReplayResult out;
  out.series.rate = rate;
  out.series.t0 = t_first;
  out.series.samples.reserve(count);
  out.frames.reserve(count);

  TapSession session(profiles, options);
  std::size_t next = 0;
  for (std::size_t n = 0; n < count; ++n) {
    const double now = out.series.time_at(n);
    while (next < trace.size() && trace[next].t <= now) {
      session.ingest_pointer(trace[next]);
      ++next;
    }
    auto rec = step_frame(session, scene, now);
    out.series.samples.push_back(rec.sample);
    out.frames.push_back(std::move(rec));
  }
  out.log = session.log();
  return out;
}

}  // namespace tapsim::tap
