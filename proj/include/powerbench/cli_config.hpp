#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "powerbench/config.hpp"
#include "powerbench/meter_config.hpp"
#include "powerbench/net.hpp"

namespace powerbench {

/// Settings shared by the subcommands. Layers, later wins:
/// defaults, config file, environment, command-line flags.
///
/// Config file keys: endpoint, datagram, meter (URI or mapping),
/// register_map, output_dir, poll_interval, response_timeout, log_level.
/// Environment: POWERBENCH_ENDPOINT, POWERBENCH_OUTPUT_DIR, POWERBENCH_REGISTER_MAP.
struct CliConfig {
  net::Endpoint endpoint{"127.0.0.1", 9595};
  bool datagram = false;
  MeterConfig meter;
  std::string register_map;  // empty = built-in map
  std::filesystem::path output_dir = "sessions";
  double poll_interval = 1.0;
  double response_timeout = 0.5;
  std::string log_level = "info";
  std::optional<std::filesystem::path> config_file;

  void apply_file(const std::filesystem::path& path);
  void apply_node(const ConfigNode& node);
  using EnvLookup = std::function<std::optional<std::string>(const char*)>;
  void apply_env(const EnvLookup& lookup);
  void apply_process_env();

  /// The meter settings with the effective register map filled in.
  MeterConfig effective_meter() const;

  void validate() const;

  /// "key=value" lines describing the effective configuration.
  std::vector<std::string> describe() const;
};

/// Flag layer: only the flags the user actually gave.
struct CliOverrides {
  std::optional<std::string> endpoint;
  std::optional<bool> datagram;
  std::optional<std::string> meter;
  std::optional<std::string> register_map;
  std::optional<std::string> output_dir;
  std::optional<double> poll_interval;
  std::optional<double> response_timeout;
  std::optional<std::string> log_level;

  void apply_to(CliConfig& config) const;
};

/// defaults <- file (if any) <- environment <- flags
CliConfig load_cli_config(const std::optional<std::filesystem::path>& file, const CliOverrides& flags,
                          const CliConfig::EnvLookup& env);

}  // namespace powerbench
