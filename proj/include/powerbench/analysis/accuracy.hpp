#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "powerbench/emulator/meter.hpp"
#include "powerbench/metrology.hpp"

namespace powerbench::analysis {

/// Class 1 meters may be off by at most 1% of energy.
inline constexpr double kClassOneLimit = 0.01;

/// A calibrator point together with what the meter made of it: either a
/// logged session or just the energy it reported.
struct AccuracyInput {
  std::string label;
  emulator::CalibratorSetting setting;
  std::optional<SessionRecord> session;
  std::optional<double> reported_energy;  // J, used when there is no session
};

struct AccuracyRow {
  std::string label;
  double duration = 0.0;
  double voltage = 0.0;
  double current = 0.0;
  double power_factor = 0.0;
  emulator::LoadCharacter load = emulator::LoadCharacter::kResistive;
  double provided_energy = 0.0;
  double measured_energy = 0.0;
  double relative_energy_error = 0.0;
  /// measured_energy / duration
  double mean_power = 0.0;
  double relative_power_error = 0.0;
  /// Population variance of the polled active power; absent without a session.
  std::optional<double> power_variance;
  std::size_t sample_count = 0;
  bool pass = false;
};

/// The class verdict alone.
bool class_one_pass(double relative_energy_error);

/// One row per input. The reference is U * I * cos(phi) * t with t the
/// calibrator duration; the measured energy is the rectangle-rule energy of
/// the session or the reported energy.
std::vector<AccuracyRow> accuracy_report(const std::vector<AccuracyInput>& inputs);

/// "0.5 (ind.)", "1", "0.5 (cap.)"
std::string power_factor_text(double power_factor, emulator::LoadCharacter load);

std::string accuracy_csv_header();
void write_accuracy_csv(const std::vector<AccuracyRow>& rows, std::ostream& out,
                        const std::vector<std::string>& comments = {});
/// Fixed-width table, columns in calibration-sheet order.
void write_accuracy_table(const std::vector<AccuracyRow>& rows, std::ostream& out);

}  // namespace powerbench::analysis
