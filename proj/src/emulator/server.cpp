#include "powerbench/emulator/server.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

namespace powerbench::emulator {

void serve(MeterEmulator& meter, modbus::ByteStream& stream, std::stop_token stop, double frame_gap) {
  std::vector<std::uint8_t> buffer;
  std::uint8_t chunk[256];
  while (!stop.stop_requested()) {
    std::size_t n = 0;
    try {
      n = stream.read_some(chunk, buffer.empty() ? 0.1 : frame_gap);
    } catch (const modbus::ModbusError&) {
      return;
    }
    if (n == 0) {
      buffer.clear();  // silence ends whatever partial frame was pending
      continue;
    }
    buffer.insert(buffer.end(), chunk, chunk + n);
    while (buffer.size() >= modbus::kRequestSize) {
      const std::span<const std::uint8_t> frame(buffer.data(), modbus::kRequestSize);
      auto reply = meter.handle_request(frame);
      if (!reply) {
        buffer.clear();
        break;
      }
      buffer.erase(buffer.begin(), buffer.begin() + modbus::kRequestSize);
      try {
        stream.write(*reply);
      } catch (const modbus::ModbusError&) {
        return;
      }
    }
  }
}

void serve_tcp(MeterEmulator& meter, net::TcpListener& listener, std::stop_token stop) {
  while (!stop.stop_requested()) {
    auto fd = listener.accept(0.2);
    if (!fd.valid()) continue;
    modbus::FdStream stream(std::move(fd));
    serve(meter, stream, stop);
  }
}

void EmulatorLink::write(std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(mu_);
  bytes_written_ += bytes.size();
  if (offline_) return;
  inbox_.insert(inbox_.end(), bytes.begin(), bytes.end());
  while (inbox_.size() >= modbus::kRequestSize) {
    auto reply = meter_.handle_request(std::span(inbox_.data(), modbus::kRequestSize));
    if (!reply) {
      inbox_.clear();
      return;
    }
    inbox_.erase(inbox_.begin(), inbox_.begin() + modbus::kRequestSize);
    outbox_.insert(outbox_.end(), reply->begin(), reply->end());
  }
}

std::size_t EmulatorLink::read_some(std::span<std::uint8_t> buf, double /*timeout*/) {
  std::lock_guard lock(mu_);
  const std::size_t n = std::min(buf.size(), outbox_.size());
  std::copy_n(outbox_.begin(), n, buf.begin());
  outbox_.erase(outbox_.begin(), outbox_.begin() + static_cast<std::ptrdiff_t>(n));
  return n;
}

}  // namespace powerbench::emulator
