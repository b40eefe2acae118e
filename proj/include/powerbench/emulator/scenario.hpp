#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "powerbench/emulator/meter.hpp"

namespace powerbench::emulator {

/// Printed values a scenario is checked against (all optional).
struct ScenarioReference {
  std::optional<double> provided_energy;
  std::optional<double> measured_energy;
  std::optional<double> relative_error;
  std::optional<double> mean_power;
  std::optional<double> power_variance;
};

/// Declarative emulator setup. A scenario either describes a calibrator
/// point (one constant step for a fixed duration) or a free-form profile.
///
///   name: table1-row-a
///   calibrator: {voltage: 230, current: 5, power_factor: 1, load: resistive, duration: 300.03}
///   profile:    {frequency: 50, steps: [{duration, voltage, current, power_factor, load}],
///                load_map: [{percent, current, power_factor}]}
///   error:      {gain: -0.0035, noise_sd: 0.17, starting_current: 0.095, seed: 1}
///   reference:  {provided_energy, measured_energy, relative_error, mean_power, power_variance}
struct Scenario {
  std::string name;
  std::optional<CalibratorSetting> calibrator;
  LoadProfile profile;
  ErrorModel error;
  std::uint8_t unit_id = 1;
  ScenarioReference reference;

  static Scenario load_file(const std::filesystem::path& path);
  static Scenario load_string(const std::string& yaml, const std::string& source = "<string>");
};

/// Directory holding the bundled scenario files.
std::filesystem::path bundled_scenario_dir();

/// Accepts a path, or a bundled scenario name such as "table1-row-a".
std::filesystem::path resolve_scenario(const std::string& name_or_path);

/// All *.yaml files of a directory, sorted by file name.
std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir);

}  // namespace powerbench::emulator
