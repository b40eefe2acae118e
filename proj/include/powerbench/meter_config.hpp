#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "powerbench/clock.hpp"
#include "powerbench/config.hpp"
#include "powerbench/emulator/meter.hpp"
#include "powerbench/modbus/register_map.hpp"
#include "powerbench/modbus/transport.hpp"
#include "powerbench/net.hpp"

namespace powerbench {

enum class MeterKind { kEmulated, kTcp, kSerial };

/// How to reach the meter. Written as a URI on the command line:
///   emulated:<scenario name or file>
///   tcp:<host>:<port>          RTU frames over a raw TCP stream
///   serial:<device>[:<baud>]   RS-485 adapter, 8E1 unless configured otherwise
struct MeterConfig {
  MeterKind kind = MeterKind::kEmulated;
  std::string scenario = "desktop-ladder";
  net::Endpoint endpoint{"127.0.0.1", 5020};
  modbus::SerialSettings serial;
  std::string register_map;  // empty = built-in project map
  std::uint8_t unit_id = 1;

  static MeterConfig parse_uri(const std::string& uri);
  /// Mapping form: {uri: ..., register_map: ..., unit_id: ..., parity: E, ...}
  static MeterConfig from_node(const ConfigNode& node);
  std::string to_uri() const;
};

struct MeterConnection {
  std::unique_ptr<emulator::MeterEmulator> emulator;  // set for emulated meters
  std::unique_ptr<modbus::ByteStream> stream;
  modbus::RegisterMap map;
};

/// For an emulated meter, the emulator follows `clock` and is reached
/// through an in-process link.
MeterConnection open_meter(const MeterConfig& config, const Clock& clock);

}  // namespace powerbench
