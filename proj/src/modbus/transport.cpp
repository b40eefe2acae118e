#include "powerbench/modbus/transport.hpp"

#include <fcntl.h>
#include <sys/socket.h>
#include <termios.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace powerbench::modbus {

void read_exact(ByteStream& stream, std::span<std::uint8_t> out, double timeout) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::duration<double>(timeout);
  std::size_t got = 0;
  while (got < out.size()) {
    const double left = std::chrono::duration<double>(deadline - clock::now()).count();
    const std::size_t n = stream.read_some(out.subspan(got), left > 0 ? left : 0.0);
    if (n == 0) throw ModbusError(Errc::kTimeout, "no response within the response window");
    got += n;
  }
}

void FdStream::write(std::span<const std::uint8_t> bytes) {
  if (!fd_.valid()) throw ModbusError(Errc::kTransportLost, "stream closed");
  try {
    net::write_all(fd_.get(), bytes.data(), bytes.size());
  } catch (const net::NetError& e) {
    throw ModbusError(Errc::kTransportLost, e.what());
  }
}

std::size_t FdStream::read_some(std::span<std::uint8_t> buf, double timeout) {
  if (!fd_.valid()) throw ModbusError(Errc::kTransportLost, "stream closed");
  if (buf.empty()) return 0;
  if (!net::wait_readable(fd_.get(), timeout)) return 0;
  for (;;) {
    const ssize_t n = ::read(fd_.get(), buf.data(), buf.size());
    if (n > 0) return static_cast<std::size_t>(n);
    if (n == 0) throw ModbusError(Errc::kTransportLost, "peer closed the stream");
    if (errno == EINTR) continue;
    if (errno == EAGAIN) return 0;
    throw ModbusError(Errc::kTransportLost, std::string("read: ") + std::strerror(errno));
  }
}

std::pair<std::unique_ptr<FdStream>, std::unique_ptr<FdStream>> make_socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0)
    throw net::NetError(std::string("socketpair: ") + std::strerror(errno));
  return {std::make_unique<FdStream>(net::UniqueFd(fds[0])), std::make_unique<FdStream>(net::UniqueFd(fds[1]))};
}

std::unique_ptr<FdStream> connect_tcp_stream(const net::Endpoint& endpoint) {
  return std::make_unique<FdStream>(net::connect_tcp(endpoint));
}

namespace {

speed_t baud_constant(int baud) {
  switch (baud) {
    case 1200: return B1200;
    case 2400: return B2400;
    case 4800: return B4800;
    case 9600: return B9600;
    case 19200: return B19200;
    case 38400: return B38400;
    case 57600: return B57600;
    case 115200: return B115200;
    default: throw std::invalid_argument("unsupported baud rate " + std::to_string(baud));
  }
}

}  // namespace

std::unique_ptr<FdStream> open_serial(const SerialSettings& s) {
  net::UniqueFd fd(::open(s.device.c_str(), O_RDWR | O_NOCTTY | O_CLOEXEC));
  if (!fd.valid()) throw net::NetError("cannot open " + s.device + ": " + std::strerror(errno));

  termios tio{};
  if (::tcgetattr(fd.get(), &tio) != 0) throw net::NetError("tcgetattr " + s.device + ": " + std::strerror(errno));
  cfmakeraw(&tio);
  cfsetispeed(&tio, baud_constant(s.baud));
  cfsetospeed(&tio, baud_constant(s.baud));
  tio.c_cflag &= ~(CSIZE | PARENB | PARODD | CSTOPB);
  tio.c_cflag |= CLOCAL | CREAD;
  switch (s.data_bits) {
    case 7: tio.c_cflag |= CS7; break;
    case 8: tio.c_cflag |= CS8; break;
    default: throw std::invalid_argument("data bits must be 7 or 8");
  }
  if (s.parity == 'E') tio.c_cflag |= PARENB;
  else if (s.parity == 'O') tio.c_cflag |= PARENB | PARODD;
  else if (s.parity != 'N') throw std::invalid_argument("parity must be N, E or O");
  if (s.stop_bits == 2) tio.c_cflag |= CSTOPB;
  tio.c_cc[VMIN] = 0;
  tio.c_cc[VTIME] = 0;
  if (::tcsetattr(fd.get(), TCSANOW, &tio) != 0)
    throw net::NetError("tcsetattr " + s.device + ": " + std::strerror(errno));
  return std::make_unique<FdStream>(std::move(fd));
}

}  // namespace powerbench::modbus
