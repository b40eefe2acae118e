#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace powerbench::modbus {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kReadHoldingRegisters = 0x03;
inline constexpr std::uint8_t kExceptionFlag = 0x80;
inline constexpr std::uint8_t kMinUnitId = 1;
inline constexpr std::uint8_t kMaxUnitId = 247;
inline constexpr std::uint16_t kMaxReadCount = 125;
inline constexpr std::size_t kRequestSize = 8;

enum class ExceptionCode : std::uint8_t {
  kIllegalFunction = 0x01,
  kIllegalDataAddress = 0x02,
  kIllegalDataValue = 0x03,
};

enum class Errc {
  kCrcMismatch,
  kShortFrame,
  kExceptionResponse,
  kUnitMismatch,
  kMalformed,  // checksum is fine but the content is not a valid frame
  kTimeout,
  kTransportLost,
};

const char* to_string(Errc code);

class ModbusError : public std::runtime_error {
 public:
  ModbusError(Errc code, const std::string& what, std::uint8_t exception_code = 0)
      : std::runtime_error(what), code_(code), exception_code_(exception_code) {}
  Errc code() const noexcept { return code_; }
  std::uint8_t exception_code() const noexcept { return exception_code_; }

 private:
  Errc code_;
  std::uint8_t exception_code_;
};

struct RequestFrame {
  std::uint8_t unit_id = 1;
  std::uint8_t function = kReadHoldingRegisters;
  std::uint16_t start_address = 0;
  std::uint16_t count = 1;
  std::uint16_t crc = 0;

  bool operator==(const RequestFrame&) const = default;
};

struct ResponseFrame {
  std::uint8_t unit_id = 1;
  std::uint8_t function = kReadHoldingRegisters;
  std::uint8_t byte_count = 0;
  std::vector<std::uint16_t> registers;
  std::uint16_t crc = 0;

  bool operator==(const ResponseFrame&) const = default;
};

/// Appends the CRC, low byte first.
void append_crc(Bytes& frame);

/// 8-byte read-holding-registers request. Throws std::out_of_range on bad unit or count.
Bytes encode_read_request(std::uint8_t unit_id, std::uint16_t start_address, std::uint16_t count);

/// Server side encoders.
Bytes encode_read_response(std::uint8_t unit_id, std::span<const std::uint16_t> registers);
Bytes encode_exception(std::uint8_t unit_id, std::uint8_t function, ExceptionCode code);

/// Parses a request. The checksum is verified before any field is interpreted.
RequestFrame decode_request(std::span<const std::uint8_t> bytes);

/// Parses a response for `expected_unit`. Throws ModbusError classified as
/// ShortFrame, CrcMismatch, UnitMismatch, ExceptionResponse or Malformed.
ResponseFrame decode_response(std::span<const std::uint8_t> bytes, std::uint8_t expected_unit);

/// Total length of a response given its first three bytes.
std::size_t response_length(std::span<const std::uint8_t> header);

}  // namespace powerbench::modbus
