#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "powerbench/emulator/scenario.hpp"
#include "powerbench/logger/power_logger.hpp"

namespace powerbench::orchestrator {

struct AccuracyRunOptions {
  double poll_interval = 0.01;
  /// Session CSVs are written here when set.
  std::optional<std::filesystem::path> output_dir;
  std::vector<std::string> csv_comments;
};

/// Runs a calibrator scenario through emulator, Modbus poll loop and logger
/// on a simulated clock, logging from t = 0 to the calibrator duration.
/// The scenario must carry a calibrator block.
logger::FinishedSession run_accuracy_scenario(const emulator::Scenario& scenario,
                                              const AccuracyRunOptions& options = {});

}  // namespace powerbench::orchestrator
