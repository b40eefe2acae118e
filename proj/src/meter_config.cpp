#include "powerbench/meter_config.hpp"

#include "powerbench/emulator/scenario.hpp"
#include "powerbench/emulator/server.hpp"

namespace powerbench {

MeterConfig MeterConfig::parse_uri(const std::string& uri) {
  MeterConfig c;
  const auto colon = uri.find(':');
  if (colon == std::string::npos) throw ConfigError("meter URI '" + uri + "' lacks a scheme (emulated:, tcp:, serial:)");
  const auto scheme = uri.substr(0, colon);
  const auto rest = uri.substr(colon + 1);
  if (scheme == "emulated") {
    c.kind = MeterKind::kEmulated;
    if (!rest.empty()) c.scenario = rest;
  } else if (scheme == "tcp") {
    c.kind = MeterKind::kTcp;
    try {
      c.endpoint = net::Endpoint::parse(rest);
    } catch (const net::NetError& e) {
      throw ConfigError(e.what());
    }
  } else if (scheme == "serial") {
    c.kind = MeterKind::kSerial;
    const auto baud_sep = rest.rfind(':');
    if (baud_sep != std::string::npos) {
      c.serial.device = rest.substr(0, baud_sep);
      try {
        c.serial.baud = std::stoi(rest.substr(baud_sep + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad baud rate in meter URI '" + uri + "'");
      }
    } else {
      c.serial.device = rest;
    }
  } else {
    throw ConfigError("unknown meter scheme '" + scheme + "'");
  }
  return c;
}

MeterConfig MeterConfig::from_node(const ConfigNode& node) {
  MeterConfig c;
  try {
    c = parse_uri(node.get_or<std::string>("uri", "emulated:desktop-ladder"));
  } catch (const ConfigError& e) {
    node.at("uri").fail(e.what());
  }
  c.register_map = node.get_or<std::string>("register_map", "");
  const int unit = node.get_or<int>("unit_id", 1);
  if (unit < 1 || unit > 247) node.at("unit_id").fail("unit_id must be within 1..247");
  c.unit_id = static_cast<std::uint8_t>(unit);
  const auto parity = node.get_or<std::string>("parity", "E");
  if (parity.size() != 1 || std::string("NEO").find(parity[0]) == std::string::npos)
    node.at("parity").fail("parity must be N, E or O");
  c.serial.parity = parity[0];
  c.serial.data_bits = node.get_or<int>("data_bits", 8);
  c.serial.stop_bits = node.get_or<int>("stop_bits", 1);
  if (node.has("baud")) c.serial.baud = node.get<int>("baud");
  return c;
}

std::string MeterConfig::to_uri() const {
  switch (kind) {
    case MeterKind::kEmulated: return "emulated:" + scenario;
    case MeterKind::kTcp: return "tcp:" + endpoint.to_string();
    case MeterKind::kSerial: return "serial:" + serial.device + ":" + std::to_string(serial.baud);
  }
  return {};
}

MeterConnection open_meter(const MeterConfig& config, const Clock& clock) {
  MeterConnection conn;
  conn.map = config.register_map.empty() ? modbus::RegisterMap::project_default()
                                         : modbus::RegisterMap::load_file(config.register_map);
  switch (config.kind) {
    case MeterKind::kEmulated: {
      const auto sc = emulator::Scenario::load_file(emulator::resolve_scenario(config.scenario));
      conn.emulator = std::make_unique<emulator::MeterEmulator>(sc.profile, sc.error, conn.map, config.unit_id, &clock);
      conn.stream = std::make_unique<emulator::EmulatorLink>(*conn.emulator);
      break;
    }
    case MeterKind::kTcp:
      conn.stream = modbus::connect_tcp_stream(config.endpoint);
      break;
    case MeterKind::kSerial:
      conn.stream = modbus::open_serial(config.serial);
      break;
  }
  return conn;
}

}  // namespace powerbench
