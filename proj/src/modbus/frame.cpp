#include "powerbench/modbus/frame.hpp"

#include "powerbench/modbus/crc.hpp"

namespace powerbench::modbus {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::kCrcMismatch: return "CrcMismatch";
    case Errc::kShortFrame: return "ShortFrame";
    case Errc::kExceptionResponse: return "ExceptionResponse";
    case Errc::kUnitMismatch: return "UnitMismatch";
    case Errc::kMalformed: return "Malformed";
    case Errc::kTimeout: return "Timeout";
    case Errc::kTransportLost: return "TransportLost";
  }
  return "Unknown";
}

namespace {

std::uint16_t wire_crc(std::span<const std::uint8_t> frame) {
  const auto n = frame.size();
  return static_cast<std::uint16_t>(frame[n - 2] | (frame[n - 1] << 8));
}

void check_crc(std::span<const std::uint8_t> frame) {
  const auto computed = crc16(frame.first(frame.size() - 2));
  if (computed != wire_crc(frame))
    throw ModbusError(Errc::kCrcMismatch, "CRC mismatch");
}

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

}  // namespace

void append_crc(Bytes& frame) {
  const auto crc = crc16(frame);
  frame.push_back(static_cast<std::uint8_t>(crc & 0xFF));
  frame.push_back(static_cast<std::uint8_t>(crc >> 8));
}

Bytes encode_read_request(std::uint8_t unit_id, std::uint16_t start_address, std::uint16_t count) {
  if (unit_id < kMinUnitId || unit_id > kMaxUnitId)
    throw std::out_of_range("unit id must be within 1..247");
  if (count < 1 || count > kMaxReadCount)
    throw std::out_of_range("register count must be within 1..125");
  if (static_cast<unsigned>(start_address) + count > 0x10000u)
    throw std::out_of_range("register range exceeds the 16-bit address space");
  Bytes frame{unit_id, kReadHoldingRegisters};
  put_u16(frame, start_address);
  put_u16(frame, count);
  append_crc(frame);
  return frame;
}

Bytes encode_read_response(std::uint8_t unit_id, std::span<const std::uint16_t> registers) {
  if (registers.size() > kMaxReadCount) throw std::out_of_range("too many registers for one reply");
  Bytes frame{unit_id, kReadHoldingRegisters, static_cast<std::uint8_t>(registers.size() * 2)};
  for (auto r : registers) put_u16(frame, r);
  append_crc(frame);
  return frame;
}

Bytes encode_exception(std::uint8_t unit_id, std::uint8_t function, ExceptionCode code) {
  Bytes frame{unit_id, static_cast<std::uint8_t>(function | kExceptionFlag), static_cast<std::uint8_t>(code)};
  append_crc(frame);
  return frame;
}

RequestFrame decode_request(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kRequestSize) throw ModbusError(Errc::kShortFrame, "request shorter than 8 bytes");
  check_crc(bytes);
  if (bytes.size() != kRequestSize) throw ModbusError(Errc::kMalformed, "unexpected request length");
  RequestFrame req;
  req.unit_id = bytes[0];
  req.function = bytes[1];
  req.start_address = get_u16(bytes, 2);
  req.count = get_u16(bytes, 4);
  req.crc = wire_crc(bytes);
  return req;
}

std::size_t response_length(std::span<const std::uint8_t> header) {
  if (header.size() < 3) throw ModbusError(Errc::kShortFrame, "response header incomplete");
  if (header[1] & kExceptionFlag) return 5;
  return 3u + header[2] + 2u;
}

ResponseFrame decode_response(std::span<const std::uint8_t> bytes, std::uint8_t expected_unit) {
  if (bytes.size() < 5) throw ModbusError(Errc::kShortFrame, "response shorter than 5 bytes");
  const std::size_t expected = response_length(bytes);
  if (bytes.size() < expected) throw ModbusError(Errc::kShortFrame, "response truncated");
  check_crc(bytes);
  if (bytes.size() != expected) throw ModbusError(Errc::kMalformed, "response length disagrees with byte count");
  if (bytes[0] != expected_unit)
    throw ModbusError(Errc::kUnitMismatch,
                      "reply from unit " + std::to_string(bytes[0]) + ", expected " + std::to_string(expected_unit));
  if (bytes[1] & kExceptionFlag)
    throw ModbusError(Errc::kExceptionResponse, "exception code " + std::to_string(bytes[2]), bytes[2]);
  if (bytes[1] != kReadHoldingRegisters) throw ModbusError(Errc::kMalformed, "unsupported function code");
  if (bytes[2] % 2 != 0) throw ModbusError(Errc::kMalformed, "odd byte count");

  ResponseFrame resp;
  resp.unit_id = bytes[0];
  resp.function = bytes[1];
  resp.byte_count = bytes[2];
  resp.registers.reserve(resp.byte_count / 2);
  for (std::size_t i = 0; i < resp.byte_count; i += 2) resp.registers.push_back(get_u16(bytes, 3 + i));
  resp.crc = wire_crc(bytes);
  return resp;
}

}  // namespace powerbench::modbus
