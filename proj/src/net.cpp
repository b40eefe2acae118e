#include "powerbench/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace powerbench::net {

namespace {

[[noreturn]] void fail(const std::string& what) { throw NetError(what + ": " + std::strerror(errno)); }

sockaddr_in resolve(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host.empty() || ep.host == "localhost" ? "127.0.0.1" : ep.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  addrinfo* result = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &result) != 0 || result == nullptr)
    throw NetError("cannot resolve host '" + ep.host + "'");
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
  freeaddrinfo(result);
  return addr;
}

std::uint16_t bound_port(int fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) fail("getsockname");
  return ntohs(addr.sin_port);
}

}  // namespace

void UniqueFd::reset(int fd) {
  if (fd_ >= 0) ::close(fd_);
  fd_ = fd;
}

Endpoint Endpoint::parse(const std::string& text) {
  Endpoint ep;
  std::string port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string::npos) {
    ep.host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  try {
    std::size_t used = 0;
    const int port = std::stoi(port_text, &used);
    if (used != port_text.size() || port < 0 || port > 65535) throw std::invalid_argument("range");
    ep.port = static_cast<std::uint16_t>(port);
  } catch (const std::exception&) {
    throw NetError("invalid endpoint '" + text + "', expected host:port");
  }
  if (ep.host.empty()) ep.host = "127.0.0.1";
  return ep;
}

bool wait_readable(int fd, double timeout_seconds) {
  pollfd pfd{fd, POLLIN, 0};
  const int ms = timeout_seconds <= 0 ? 0 : static_cast<int>(timeout_seconds * 1000.0 + 0.5);
  for (;;) {
    const int rc = ::poll(&pfd, 1, ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) fail("poll");
    return rc > 0;
  }
}

TcpListener::TcpListener(const Endpoint& endpoint, int backlog) {
  fd_.reset(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!fd_.valid()) fail("socket");
  int one = 1;
  ::setsockopt(fd_.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  auto addr = resolve(endpoint);
  if (::bind(fd_.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    fail("cannot bind " + endpoint.to_string());
  if (::listen(fd_.get(), backlog) != 0) fail("listen");
  port_ = bound_port(fd_.get());
}

UniqueFd TcpListener::accept(double timeout_seconds) {
  if (!wait_readable(fd_.get(), timeout_seconds)) return UniqueFd{};
  const int fd = ::accept4(fd_.get(), nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) {
    if (errno == EINTR || errno == EAGAIN || errno == ECONNABORTED) return UniqueFd{};
    fail("accept");
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return UniqueFd(fd);
}

UdpSocket::UdpSocket(const Endpoint& bind_to) {
  fd_.reset(::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0));
  if (!fd_.valid()) fail("socket");
  auto addr = resolve(bind_to);
  if (::bind(fd_.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    fail("cannot bind udp " + bind_to.to_string());
  port_ = bound_port(fd_.get());
}

std::optional<std::string> UdpSocket::receive(double timeout_seconds) {
  if (!wait_readable(fd_.get(), timeout_seconds)) return std::nullopt;
  char buf[512];
  const ssize_t n = ::recv(fd_.get(), buf, sizeof(buf), 0);
  if (n < 0) {
    if (errno == EINTR || errno == EAGAIN) return std::nullopt;
    fail("recv");
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

UniqueFd connect_tcp(const Endpoint& endpoint, double timeout_seconds) {
  UniqueFd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
  if (!fd.valid()) fail("socket");
  auto addr = resolve(endpoint);
  if (::connect(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    if (errno != EINPROGRESS) fail("cannot connect to " + endpoint.to_string());
    pollfd pfd{fd.get(), POLLOUT, 0};
    if (::poll(&pfd, 1, static_cast<int>(timeout_seconds * 1000)) <= 0)
      throw NetError("timed out connecting to " + endpoint.to_string());
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      errno = err;
      fail("cannot connect to " + endpoint.to_string());
    }
  }
  const int flags = ::fcntl(fd.get(), F_GETFL);
  ::fcntl(fd.get(), F_SETFL, flags & ~O_NONBLOCK);
  int one = 1;
  ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return fd;
}

void send_datagram(const Endpoint& endpoint, const std::string& payload) {
  UniqueFd fd(::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0));
  if (!fd.valid()) fail("socket");
  auto addr = resolve(endpoint);
  if (::sendto(fd.get(), payload.data(), payload.size(), 0, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
    fail("sendto " + endpoint.to_string());
}

void write_all(int fd, const void* data, std::size_t size) {
  const auto* p = static_cast<const char*>(data);
  while (size > 0) {
    const ssize_t n = ::send(fd, p, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == ENOTSOCK) {
        const ssize_t w = ::write(fd, p, size);
        if (w < 0) {
          if (errno == EINTR) continue;
          fail("write");
        }
        p += w;
        size -= static_cast<std::size_t>(w);
        continue;
      }
      fail("send");
    }
    p += n;
    size -= static_cast<std::size_t>(n);
  }
}

}  // namespace powerbench::net
