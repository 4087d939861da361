#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "tapsim/config.hpp"
#include "tapsim/protocol.hpp"
#include "tapsim/tap_engine.hpp"

namespace tapsim::io {

/// Per-connection session logic, independent of the transport.
///
/// The first FingerSample fixes the session time base: tick n runs at client
/// time t0 + n / control_rate and is processed once the server clock has
/// passed the matching instant plus `jitter_buffer`. Samples are applied to
/// ticks by client timestamp (zero-order hold), so a trace streamed at its
/// own pace reproduces the offline replay while arrival jitter stays below
/// the buffer. Messages received before a tick runs apply to that tick.
class LiveSession {
 public:
  explicit LiveSession(const AppConfig& config);

  /// Parses and applies one inbound line; a malformed or out-of-order
  /// message yields a single ErrorMsg and leaves the session untouched.
  std::vector<Outbound> on_message(std::string_view line, double server_now);

  /// Throws InvalidArgument on timestamp regression.
  void on_sample(const FingerSample& sample, double server_now);

  /// Runs every tick due at `server_now`. Emits PhaseTransition messages for
  /// each logged change and a StateUpdate on wire-rate boundaries and on
  /// every tick whose phase differs from the previous tick.
  std::vector<Outbound> tick(double server_now);

  /// Server time at which the next tick becomes due, once started.
  [[nodiscard]] std::optional<double> next_due() const;

  [[nodiscard]] const tap::TapSession& session() const { return session_; }
  [[nodiscard]] std::uint64_t ticks_run() const { return next_tick_; }

 private:
  tap::Scene scene_;
  double control_rate_;
  double wire_rate_;
  double jitter_;
  tap::TapSession session_;
  std::deque<tap::FingerState> pending_;
  std::optional<double> last_sample_t_;
  std::optional<double> client_t0_;
  double server_t0_ = 0.0;
  std::uint64_t next_tick_ = 0;
  std::optional<std::int64_t> last_wire_slot_;
  tap::Phase last_phase_ = tap::Phase::idle;
  std::size_t log_sent_ = 0;
};

}  // namespace tapsim::io
