#include "powerbench/logger/control.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>

#include <spdlog/spdlog.h>

namespace powerbench::logger {

namespace {

constexpr std::size_t kMaxLine = 256;
constexpr double kLineTimeout = 2.0;

std::string read_line(int fd) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::duration<double>(kLineTimeout);
  std::string line;
  char buf[128];
  while (line.size() <= kMaxLine) {
    const double left = std::chrono::duration<double>(deadline - clock::now()).count();
    if (left <= 0 || !net::wait_readable(fd, left)) break;
    const ssize_t n = ::read(fd, buf, sizeof(buf));
    if (n <= 0) break;  // EOF terminates the line too
    line.append(buf, static_cast<std::size_t>(n));
    if (line.find('\n') != std::string::npos) break;
  }
  return line;
}

}  // namespace

bool is_valid_label(std::string_view label) {
  if (label.empty() || label.size() > 64) return false;
  return std::all_of(label.begin(), label.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '-';
  });
}

std::optional<ControlCommand> parse_command(std::string_view line) {
  if (auto nl = line.find('\n'); nl != std::string_view::npos) line = line.substr(0, nl);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  if (line == "start") return ControlCommand{Verb::kStart, std::nullopt};
  if (line == "stop") return ControlCommand{Verb::kStop, std::nullopt};
  constexpr std::string_view kStartWithLabel = "start ";
  if (line.starts_with(kStartWithLabel)) {
    const auto label = line.substr(kStartWithLabel.size());
    if (is_valid_label(label)) return ControlCommand{Verb::kStart, std::string(label)};
  }
  return std::nullopt;
}

std::string format_command(const ControlCommand& command) {
  std::string line = command.verb == Verb::kStart ? "start" : "stop";
  if (command.verb == Verb::kStart && command.label) line += " " + *command.label;
  line += '\n';
  return line;
}

void send_control(const net::Endpoint& endpoint, const ControlCommand& command, bool datagram) {
  const auto payload = format_command(command);
  if (datagram) {
    net::send_datagram(endpoint, payload);
    return;
  }
  auto fd = net::connect_tcp(endpoint);
  net::write_all(fd.get(), payload.data(), payload.size());
  ::shutdown(fd.get(), SHUT_WR);
}

ControlServer::ControlServer(const net::Endpoint& endpoint, LineHandler handler, bool with_datagram)
    : listener_(endpoint), handler_(std::move(handler)) {
  if (with_datagram) udp_ = std::make_unique<net::UdpSocket>(net::Endpoint{endpoint.host, listener_.port()});
}

ControlServer::~ControlServer() { stop(); }

std::optional<std::uint16_t> ControlServer::datagram_port() const {
  if (!udp_) return std::nullopt;
  return udp_->port();
}

void ControlServer::start() {
  tcp_thread_ = std::jthread([this](std::stop_token st) { accept_loop(st); });
  if (udp_) udp_thread_ = std::jthread([this](std::stop_token st) { datagram_loop(st); });
}

void ControlServer::stop() {
  tcp_thread_.request_stop();
  udp_thread_.request_stop();
  if (tcp_thread_.joinable()) tcp_thread_.join();
  if (udp_thread_.joinable()) udp_thread_.join();
}

void ControlServer::accept_loop(std::stop_token stop) {
  while (!stop.stop_requested()) {
    net::UniqueFd conn;
    try {
      conn = listener_.accept(0.1);
    } catch (const net::NetError& e) {
      spdlog::error("control listener: {}", e.what());
      continue;
    }
    if (!conn.valid()) continue;
    const auto line = read_line(conn.get());
    conn.reset();  // close without replying
    handler_(line);
  }
}

void ControlServer::datagram_loop(std::stop_token stop) {
  while (!stop.stop_requested()) {
    auto payload = udp_->receive(0.1);
    if (payload) handler_(*payload);
  }
}

}  // namespace powerbench::logger
