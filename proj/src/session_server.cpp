#include "tapsim/session_server.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "tapsim/live_session.hpp"

namespace tapsim::io {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".png") return "image/png";
  if (ext == ".svg") return "image/svg+xml";
  return "application/octet-stream";
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, const AppConfig& config)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        live_(config),
        period_(std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / config.control_rate))),
        scene_{config.scene, config.z_panel * 1e3, config.control_rate, config.wire_rate} {}

  void start(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  double now() const { return std::chrono::duration<double>(Clock::now() - epoch_).count(); }

  void on_accept(beast::error_code ec) {
    if (ec) return;
    epoch_ = Clock::now();
    deadline_ = epoch_;
    send(encode(Outbound{scene_}));
    do_read();
    arm_timer();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      closed_ = true;
      timer_.cancel();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      for (const auto& msg : live_.on_message(line, now())) send(encode(msg));
    }
    do_read();
  }

  void arm_timer() {
    deadline_ += period_;
    timer_.expires_at(deadline_);
    timer_.async_wait(beast::bind_front_handler(&WsSession::on_tick, shared_from_this()));
  }

  void on_tick(beast::error_code ec) {
    if (ec || closed_) return;
    for (const auto& msg : live_.tick(now())) send(encode(msg));
    // After a stall, resume from the present instead of firing a backlog of timers.
    if (deadline_ + period_ < Clock::now()) deadline_ = Clock::now();
    arm_timer();
  }

  void send(std::string msg) {
    outbox_.push_back(std::move(msg));
    if (!writing_) do_write();
  }

  void do_write() {
    writing_ = true;
    ws_.async_write(net::buffer(outbox_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      closed_ = true;
      timer_.cancel();
      return;
    }
    outbox_.pop_front();
    if (outbox_.empty()) {
      writing_ = false;
    } else {
      do_write();
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  bool writing_ = false;
  bool closed_ = false;
  LiveSession live_;
  Clock::time_point epoch_;
  Clock::time_point deadline_;
  Clock::duration period_;
  SceneInfo scene_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, const AppConfig& config, std::filesystem::path root)
      : stream_(std::move(socket)), config_(config), root_(std::move(root)) {}

  void start() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
  }

 private:
  void do_read() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      beast::get_lowest_layer(stream_).expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), config_)->start(std::move(req_));
      return;
    }
    respond();
  }

  void respond() {
    auto res = std::make_shared<http::response<http::string_body>>();
    res->version(req_.version());
    res->keep_alive(false);
    std::string target(req_.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target.back() == '/') target += "index.html";

    const bool safe = target.find("..") == std::string::npos && target.front() == '/';
    const auto file = root_ / target.substr(1);
    std::ifstream in(file, std::ios::binary);
    if (req_.method() != http::verb::get || root_.empty() || !safe || !in) {
      res->result(http::status::not_found);
      res->set(http::field::content_type, "text/plain");
      res->body() = "not found\n";
    } else {
      std::ostringstream body;
      body << in.rdbuf();
      res->result(http::status::ok);
      res->set(http::field::content_type, std::string(mime_type(file)));
      res->body() = body.str();
    }
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  const AppConfig& config_;
  std::filesystem::path root_;
};

}  // namespace

struct SessionServer::Impl {
  AppConfig config;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpSession>(std::move(socket), config, options.static_root)->start();
      if (acceptor.is_open()) accept();
    });
  }
};

SessionServer::SessionServer(AppConfig config, ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->options = std::move(options);
  tap::validate_scene(impl_->config.scene);
  try {
    const tcp::endpoint ep(net::ip::make_address(impl_->options.bind_address), impl_->options.port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen(net::socket_base::max_listen_connections);
  } catch (const boost::system::system_error& e) {
    throw std::runtime_error("cannot listen on " + impl_->options.bind_address + ":" +
                             std::to_string(impl_->options.port) + ": " + e.code().message());
  }
  impl_->accept();
}

SessionServer::~SessionServer() { stop(); }

unsigned short SessionServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void SessionServer::run() {
  const int extra = std::max(0, impl_->options.threads - 1);
  std::vector<std::jthread> pool;
  for (int i = 0; i < extra; ++i) pool.emplace_back([this] { impl_->ioc.run(); });
  impl_->ioc.run();
}

void SessionServer::stop() { impl_->ioc.stop(); }

}  // namespace tapsim::io
