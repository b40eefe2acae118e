#pragma once

#include <atomic>
#include <deque>
#include <mutex>
#include <stop_token>

#include "powerbench/emulator/meter.hpp"
#include "powerbench/modbus/transport.hpp"
#include "powerbench/net.hpp"

namespace powerbench::emulator {

/// Answers RTU requests arriving on `stream` until stopped or the stream is lost.
/// Partial frames left idle for `frame_gap` seconds are discarded, as are
/// frames with a bad checksum.
void serve(MeterEmulator& meter, modbus::ByteStream& stream, std::stop_token stop, double frame_gap = 0.05);

/// Serves one TCP client at a time (RTU frames over a raw TCP stream).
void serve_tcp(MeterEmulator& meter, net::TcpListener& listener, std::stop_token stop);

/// In-process stream wired straight into an emulator: a write is answered
/// synchronously and the reply becomes readable at once. Used with a
/// simulated clock, where a socket round trip would need real waiting.
class EmulatorLink final : public modbus::ByteStream {
 public:
  explicit EmulatorLink(MeterEmulator& meter) : meter_(meter) {}

  void write(std::span<const std::uint8_t> bytes) override;
  std::size_t read_some(std::span<std::uint8_t> buf, double timeout) override;

  /// While offline, requests vanish as if the meter were unplugged.
  void set_offline(bool offline) { offline_ = offline; }
  std::size_t bytes_written() const { return bytes_written_; }

 private:
  MeterEmulator& meter_;
  std::mutex mu_;
  std::vector<std::uint8_t> inbox_;
  std::deque<std::uint8_t> outbox_;
  std::atomic<bool> offline_{false};
  std::size_t bytes_written_ = 0;
};

}  // namespace powerbench::emulator
