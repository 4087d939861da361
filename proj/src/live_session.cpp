#include "tapsim/live_session.hpp"

#include <cmath>
#include <string>

namespace tapsim::io {

LiveSession::LiveSession(const AppConfig& config)
    : scene_(config.scene),
      control_rate_(config.control_rate),
      wire_rate_(config.wire_rate),
      jitter_(config.jitter_buffer),
      session_(config.profiles, config.session) {
  tap::validate_scene(scene_);
}

std::vector<Outbound> LiveSession::on_message(std::string_view line, double server_now) {
  try {
    on_sample(parse_finger_sample(line), server_now);
  } catch (const InvalidArgument& e) {
    return {ErrorMsg{e.what()}};
  }
  return {};
}

void LiveSession::on_sample(const FingerSample& sample, double server_now) {
  const auto state = to_finger_state(sample);
  if (last_sample_t_ && state.t < *last_sample_t_) {
    throw InvalidArgument("FingerSample t_ms " + std::to_string(sample.t_ms) + " precedes the previous sample");
  }
  last_sample_t_ = state.t;
  if (!client_t0_) {
    client_t0_ = state.t;
    server_t0_ = server_now;
  }
  pending_.push_back(state);
}

std::optional<double> LiveSession::next_due() const {
  if (!client_t0_) return std::nullopt;
  return server_t0_ + static_cast<double>(next_tick_) / control_rate_ + jitter_;
}

std::vector<Outbound> LiveSession::tick(double server_now) {
  std::vector<Outbound> out;
  if (!client_t0_) return out;
  while (server_now >= *next_due()) {
    const double now = *client_t0_ + static_cast<double>(next_tick_) / control_rate_;
    while (!pending_.empty() && pending_.front().t <= now) {
      session_.ingest_pointer(pending_.front());
      pending_.pop_front();
    }
    const auto frame = tap::step_frame(session_, scene_, now);

    const auto& log = session_.log();
    for (; log_sent_ < log.size(); ++log_sent_) out.emplace_back(make_transition(log[log_sent_]));

    const auto slot = static_cast<std::int64_t>(std::floor(static_cast<double>(next_tick_) * wire_rate_ / control_rate_));
    if (!last_wire_slot_ || slot != *last_wire_slot_ || frame.phase != last_phase_) {
      out.emplace_back(make_state_update(frame));
      last_wire_slot_ = slot;
    }
    last_phase_ = frame.phase;
    ++next_tick_;
  }
  return out;
}

}  // namespace tapsim::io
