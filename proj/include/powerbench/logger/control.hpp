#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <thread>

#include "powerbench/net.hpp"

namespace powerbench::logger {

enum class Verb { kStart, kStop };

/// One line of the logging control protocol: "start", "start <label>" or "stop".
struct ControlCommand {
  Verb verb = Verb::kStart;
  std::optional<std::string> label;

  bool operator==(const ControlCommand&) const = default;
};

inline constexpr std::uint16_t kDefaultControlPort = 9595;

/// Labels end up in file names: [A-Za-z0-9._-], at most 64 characters.
bool is_valid_label(std::string_view label);

/// Case-sensitive. Takes everything up to the first LF; a trailing CR is
/// tolerated. Returns nullopt for anything else.
std::optional<ControlCommand> parse_command(std::string_view line);

/// Wire form including the terminating LF.
std::string format_command(const ControlCommand& command);

/// Sends one command and closes without reading, like `echo start | nc -q 0`.
/// Throws net::NetError when the controller cannot be reached.
void send_control(const net::Endpoint& endpoint, const ControlCommand& command, bool datagram = false);

/// Accepts connections, reads one line each and hands it to the callback.
/// Nothing is ever written back; the client has usually hung up already.
/// Optionally also listens for the same payload as a single datagram.
class ControlServer {
 public:
  using LineHandler = std::function<void(const std::string& line)>;

  /// Binds immediately; bind failures throw net::NetError.
  ControlServer(const net::Endpoint& endpoint, LineHandler handler, bool with_datagram = false);
  ~ControlServer();

  void start();
  void stop();

  std::uint16_t port() const { return listener_.port(); }
  std::optional<std::uint16_t> datagram_port() const;

 private:
  void accept_loop(std::stop_token stop);
  void datagram_loop(std::stop_token stop);

  net::TcpListener listener_;
  std::unique_ptr<net::UdpSocket> udp_;
  LineHandler handler_;
  std::jthread tcp_thread_;
  std::jthread udp_thread_;
};

}  // namespace powerbench::logger
