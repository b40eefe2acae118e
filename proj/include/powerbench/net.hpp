#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace powerbench::net {

class NetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owning POSIX file descriptor.
class UniqueFd {
 public:
  UniqueFd() = default;
  explicit UniqueFd(int fd) : fd_(fd) {}
  UniqueFd(UniqueFd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  UniqueFd& operator=(UniqueFd&& other) noexcept {
    if (this != &other) reset(std::exchange(other.fd_, -1));
    return *this;
  }
  UniqueFd(const UniqueFd&) = delete;
  UniqueFd& operator=(const UniqueFd&) = delete;
  ~UniqueFd() { reset(); }

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() { return std::exchange(fd_, -1); }
  void reset(int fd = -1);

 private:
  int fd_ = -1;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  /// "host:port"; a bare port means loopback.
  static Endpoint parse(const std::string& text);
  std::string to_string() const { return host + ":" + std::to_string(port); }
  bool operator==(const Endpoint&) const = default;
};

/// Waits until `fd` is readable. Returns false on timeout.
bool wait_readable(int fd, double timeout_seconds);

class TcpListener {
 public:
  /// Binds and listens. Port 0 picks an ephemeral port; see port().
  explicit TcpListener(const Endpoint& endpoint, int backlog = 16);
  /// Accepts one connection, or returns an invalid fd after `timeout_seconds`.
  UniqueFd accept(double timeout_seconds);
  std::uint16_t port() const { return port_; }
  int fd() const { return fd_.get(); }

 private:
  UniqueFd fd_;
  std::uint16_t port_ = 0;
};

class UdpSocket {
 public:
  explicit UdpSocket(const Endpoint& bind_to);
  /// One datagram, or nullopt after `timeout_seconds`.
  std::optional<std::string> receive(double timeout_seconds);
  std::uint16_t port() const { return port_; }

 private:
  UniqueFd fd_;
  std::uint16_t port_ = 0;
};

UniqueFd connect_tcp(const Endpoint& endpoint, double timeout_seconds = 2.0);
void send_datagram(const Endpoint& endpoint, const std::string& payload);

/// Writes all bytes or throws NetError.
void write_all(int fd, const void* data, std::size_t size);

}  // namespace powerbench::net
