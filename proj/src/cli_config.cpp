#include "powerbench/cli_config.hpp"

#include <algorithm>
#include <cstdlib>

#include "powerbench/logger/csv.hpp"

namespace powerbench {

namespace {

net::Endpoint parse_endpoint(const std::string& text, const std::string& origin) {
  try {
    return net::Endpoint::parse(text);
  } catch (const net::NetError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

}  // namespace

void CliConfig::apply_file(const std::filesystem::path& path) {
  apply_node(ConfigNode::load_file(path));
  config_file = path;
}

void CliConfig::apply_node(const ConfigNode& node) {
  if (!node.is_map()) node.fail("expected a mapping at the top level");
  static const std::vector<std::string> known{"endpoint",      "datagram",      "meter",
                                              "register_map",  "output_dir",    "poll_interval",
                                              "response_timeout", "log_level"};
  for (const auto& kv : node.raw()) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end())
      ConfigNode(kv.first, node.source()).fail("unknown key '" + key + "'");
  }
  if (auto n = node.find("endpoint")) {
    try {
      endpoint = net::Endpoint::parse(n->as<std::string>());
    } catch (const net::NetError& e) {
      n->fail(e.what());
    }
  }
  if (auto n = node.find("datagram")) datagram = n->as<bool>();
  if (auto n = node.find("meter")) {
    if (n->is_map()) {
      meter = MeterConfig::from_node(*n);
      if (!meter.register_map.empty()) register_map = meter.register_map;
    } else {
      try {
        meter = MeterConfig::parse_uri(n->as<std::string>());
      } catch (const ConfigError& e) {
        n->fail(e.what());
      }
    }
  }
  if (auto n = node.find("register_map")) register_map = n->as<std::string>();
  if (auto n = node.find("output_dir")) output_dir = n->as<std::string>();
  if (auto n = node.find("poll_interval")) {
    poll_interval = n->as<double>();
    if (!(poll_interval > 0.0)) n->fail("poll_interval must be positive");
  }
  if (auto n = node.find("response_timeout")) {
    response_timeout = n->as<double>();
    if (!(response_timeout > 0.0)) n->fail("response_timeout must be positive");
  }
  if (auto n = node.find("log_level")) log_level = n->as<std::string>();
}

void CliConfig::apply_env(const EnvLookup& lookup) {
  if (auto v = lookup("POWERBENCH_ENDPOINT")) endpoint = parse_endpoint(*v, "POWERBENCH_ENDPOINT");
  if (auto v = lookup("POWERBENCH_OUTPUT_DIR")) output_dir = *v;
  if (auto v = lookup("POWERBENCH_REGISTER_MAP")) register_map = *v;
}

void CliConfig::apply_process_env() {
  apply_env([](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  });
}

MeterConfig CliConfig::effective_meter() const {
  MeterConfig m = meter;
  m.register_map = register_map;
  return m;
}

void CliConfig::validate() const {
  if (!(poll_interval > 0.0)) throw ConfigError("poll interval must be positive");
  if (!(response_timeout > 0.0)) throw ConfigError("response timeout must be positive");
}

std::vector<std::string> CliConfig::describe() const {
  using logger::format_number;
  return {
      "config_file=" + (config_file ? config_file->string() : std::string("none")),
      "endpoint=" + endpoint.to_string(),
      std::string("datagram=") + (datagram ? "true" : "false"),
      "meter=" + meter.to_uri(),
      "unit_id=" + std::to_string(meter.unit_id),
      "register_map=" + (register_map.empty() ? std::string("builtin") : register_map),
      "output_dir=" + output_dir.string(),
      "poll_interval=" + format_number(poll_interval),
      "response_timeout=" + format_number(response_timeout),
  };
}

void CliOverrides::apply_to(CliConfig& config) const {
  if (endpoint) config.endpoint = parse_endpoint(*endpoint, "--endpoint");
  if (datagram) config.datagram = *datagram;
  if (meter) {
    const auto unit = config.meter.unit_id;
    config.meter = MeterConfig::parse_uri(*meter);
    config.meter.unit_id = unit;
  }
  if (register_map) config.register_map = *register_map;
  if (output_dir) config.output_dir = *output_dir;
  if (poll_interval) config.poll_interval = *poll_interval;
  if (response_timeout) config.response_timeout = *response_timeout;
  if (log_level) config.log_level = *log_level;
}

CliConfig load_cli_config(const std::optional<std::filesystem::path>& file, const CliOverrides& flags,
                          const CliConfig::EnvLookup& env) {
  CliConfig config;
  if (file) config.apply_file(*file);
  config.apply_env(env);
  flags.apply_to(config);
  config.validate();
  return config;
}

}  // namespace powerbench
