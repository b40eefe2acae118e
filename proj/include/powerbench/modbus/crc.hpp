#pragma once

#include <cstdint>
#include <span>

namespace powerbench::modbus {

/// CRC-16/MODBUS: reflected polynomial 0xA001, init 0xFFFF, no final xor.
/// On the wire the low byte goes first.
std::uint16_t crc16(std::span<const std::uint8_t> payload);

}  // namespace powerbench::modbus
