#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "powerbench/modbus/frame.hpp"
#include "powerbench/net.hpp"

namespace powerbench::modbus {

/// Abstract duplex byte stream under the Modbus master and the emulator.
/// Implementations throw ModbusError{kTransportLost} when the peer is gone.
class ByteStream {
 public:
  virtual ~ByteStream() = default;
  virtual void write(std::span<const std::uint8_t> bytes) = 0;
  /// Reads up to buf.size() bytes, waiting at most `timeout` seconds.
  /// Returns 0 when nothing arrived in time.
  virtual std::size_t read_some(std::span<std::uint8_t> buf, double timeout) = 0;
};

/// Reads exactly `out.size()` bytes before `timeout` seconds elapse.
/// Throws ModbusError{kTimeout} on expiry.
void read_exact(ByteStream& stream, std::span<std::uint8_t> out, double timeout);

/// Stream over a file descriptor: a socket, one end of a socketpair or a tty.
class FdStream final : public ByteStream {
 public:
  explicit FdStream(net::UniqueFd fd) : fd_(std::move(fd)) {}
  void write(std::span<const std::uint8_t> bytes) override;
  std::size_t read_some(std::span<std::uint8_t> buf, double timeout) override;
  int fd() const { return fd_.get(); }
  void close() { fd_.reset(); }

 private:
  net::UniqueFd fd_;
};

std::pair<std::unique_ptr<FdStream>, std::unique_ptr<FdStream>> make_socket_pair();

std::unique_ptr<FdStream> connect_tcp_stream(const net::Endpoint& endpoint);

/// Serial line settings for real RS-485 adapters.
struct SerialSettings {
  std::string device = "/dev/ttyUSB0";
  int baud = 9600;
  int data_bits = 8;
  char parity = 'E';  // 'N', 'E' or 'O'
  int stop_bits = 1;
};

std::unique_ptr<FdStream> open_serial(const SerialSettings& settings);

}  // namespace powerbench::modbus
