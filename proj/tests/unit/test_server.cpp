#include <chrono>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "support/ws_client.hpp"
#include "tapsim/commands.hpp"
#include "tapsim/protocol.hpp"
#include "tapsim/session_server.hpp"

using namespace tapsim;
using namespace tapsim::io;
using namespace std::chrono_literals;

namespace {

class RunningServer {
 public:
  explicit RunningServer(AppConfig cfg = {}) : server_(std::move(cfg), options()), thread_([this] { server_.run(); }) {}
  ~RunningServer() {
    server_.stop();
    thread_.join();
  }
  [[nodiscard]] unsigned short port() const { return server_.port(); }

 private:
  static ServerOptions options() {
    ServerOptions o;
    o.port = 0;
    return o;
  }
  SessionServer server_;
  std::thread thread_;
};

std::vector<Outbound> decoded(const std::vector<std::string>& raw) {
  std::vector<Outbound> out;
  for (const auto& r : raw) out.push_back(parse_outbound(r));
  return out;
}

bool has_update(const std::vector<std::string>& raw, tap::Phase phase, bool zero_amp = false) {
  for (const auto& m : decoded(raw)) {
    if (const auto* s = std::get_if<StateUpdate>(&m)) {
      if (s->phase == phase && (!zero_amp || s->amplitude == 0.0)) return true;
    }
  }
  return false;
}

std::vector<PhaseTransitionMsg> transitions(const std::vector<std::string>& raw) {
  std::vector<PhaseTransitionMsg> out;
  for (const auto& m : decoded(raw)) {
    if (const auto* t = std::get_if<PhaseTransitionMsg>(&m)) out.push_back(*t);
  }
  return out;
}

std::string sample(double t_ms, double x_mm, double y_mm, bool down) {
  return encode(FingerSample{t_ms, x_mm, y_mm, down});
}

}  // namespace

TEST_CASE("server greets with the scene and follows a tap") {
  RunningServer server;
  test::WsClient client(server.port());
  REQUIRE(client.wait_for([](const auto& r) { return !r.empty(); }));
  const auto hello = parse_outbound(client.received().front());
  REQUIRE(std::holds_alternative<SceneInfo>(hello));
  CHECK(std::get<SceneInfo>(hello).scene.size() == 2);

  client.send(sample(0.0, -80, 0, true));
  CHECK(client.wait_for([](const auto& r) { return has_update(r, tap::Phase::attenuation); }));
  client.send(sample(50.0, -80, 0, false));
  CHECK(client.wait_for([](const auto& r) {
    const auto tr = transitions(r);
    return !tr.empty() && tr.back().to == tap::Phase::idle && has_update(r, tap::Phase::idle, true);
  }));
}

TEST_CASE("server answers malformed messages with an error and keeps the connection") {
  RunningServer server;
  test::WsClient client(server.port());
  client.send("{not json");
  REQUIRE(client.wait_for([](const auto& r) {
    for (const auto& m : decoded(r)) {
      if (std::holds_alternative<ErrorMsg>(m)) return true;
    }
    return false;
  }));
  client.send(sample(0.0, -80, 0, true));
  CHECK(client.wait_for([](const auto& r) { return has_update(r, tap::Phase::attenuation); }));
}

TEST_CASE("server accepts several newline-separated samples in one frame") {
  RunningServer server;
  test::WsClient client(server.port());
  client.send(sample(0.0, 0, 0, false) + "\n" + sample(5.0, 80, 0, true) + "\n");
  CHECK(client.wait_for([](const auto& r) {
    const auto tr = transitions(r);
    return !tr.empty() && tr.front().object_id == 2 && tr.front().t_ms == doctest::Approx(5.0);
  }));
}

TEST_CASE("two clients keep independent sessions") {
  RunningServer server;
  test::WsClient red(server.port());
  test::WsClient yellow(server.port());
  red.send(sample(0.0, -80, 0, true));
  yellow.send(sample(0.0, 80, 0, true));
  REQUIRE(red.wait_for([](const auto& r) { return !transitions(r).empty(); }));
  REQUIRE(yellow.wait_for([](const auto& r) { return !transitions(r).empty(); }));
  std::this_thread::sleep_for(50ms);
  for (const auto& t : transitions(red.received())) CHECK(t.object_id == 1);
  for (const auto& t : transitions(yellow.received())) CHECK(t.object_id == 2);
}

TEST_CASE("a busy port fails at startup") {
  RunningServer holder;
  ServerOptions o;
  o.port = holder.port();
  CHECK_THROWS_AS(SessionServer(AppConfig{}, o), std::runtime_error);

  ServeArgs args;
  args.port = holder.port();
  std::ostringstream out, err;
  CHECK(cmd_serve(AppConfig{}, args, out, err) == kExitFailure);
  CHECK(err.str().find("cannot listen") != std::string::npos);
}
