#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "powerbench/clock.hpp"
#include "powerbench/metrology.hpp"
#include "powerbench/modbus/frame.hpp"
#include "powerbench/modbus/register_map.hpp"

namespace powerbench::emulator {

enum class LoadCharacter { kResistive, kInductive, kCapacitive };

std::string_view to_string(LoadCharacter c);
std::optional<LoadCharacter> load_character_from_string(std::string_view text);

/// Reference source settings. The phase angle is signed: positive when the
/// current lags (inductive), negative when it leads (capacitive).
struct CalibratorSetting {
  double voltage = 230.0;
  double current = 5.0;
  double phase_angle_deg = 0.0;
  LoadCharacter load = LoadCharacter::kResistive;
  double duration = 1.0;

  double power_factor() const;
  /// U * I * cos(phi) * t.
  double reference_energy() const;
  void validate() const;
};

/// Injected measurement error of the emulated meter.
struct ErrorModel {
  double gain_error = 0.0;  // fraction applied to reported power and energy
  double noise_sd = 0.0;    // W, Gaussian, on the active power register only
  double starting_current_threshold = 0.095;  // A
  std::uint64_t seed = 1;

  void validate() const;
};

struct ProfileStep {
  double duration = 1.0;
  double voltage = 230.0;
  double current = 0.0;
  double power_factor = 1.0;
  LoadCharacter load = LoadCharacter::kResistive;
};

/// Maps a workload percentage to the electrical draw it causes.
struct LoadPoint {
  double percent = 0.0;
  double current = 0.0;
  double power_factor = 1.0;
};

struct LoadProfile {
  std::vector<ProfileStep> steps;
  std::vector<LoadPoint> load_map;  // sorted by percent, optional
  double frequency = 50.0;

  static LoadProfile constant(double voltage, double current, double power_factor, double duration = 1.0,
                              LoadCharacter load = LoadCharacter::kResistive);
  static LoadProfile from_setting(const CalibratorSetting& setting);
  void validate() const;
  /// Linear interpolation over load_map, clamped at both ends.
  LoadPoint at_percent(double percent) const;
};

struct EmulatedMeterState {
  std::size_t step_index = 0;
  double elapsed_in_step = 0.0;
  double elapsed_total = 0.0;
  double true_energy_total = 0.0;
  double reported_energy_total = 0.0;
  double reported_reactive_energy_total = 0.0;
  ElectricalSample reported;  // what the registers currently say
  std::vector<std::uint16_t> image;
};

/// Ground-truth single-phase meter model served over Modbus. Time only moves
/// through step()/advance_to(); when constructed with a clock, every request
/// first advances the model to the clock's current time.
class MeterEmulator {
 public:
  static constexpr double kMaxInternalStep = 0.01;

  MeterEmulator(LoadProfile profile, ErrorModel error, modbus::RegisterMap map = modbus::RegisterMap::project_default(),
                std::uint8_t unit_id = 1, const Clock* clock = nullptr);

  /// Advances by `dt` seconds in internal steps of at most 10 ms. The last
  /// profile step holds once the profile is exhausted.
  void step(double dt);
  /// Advances to `t` seconds since the emulator's time origin; no-op if already past.
  void advance_to(double t);
  void sync_to_clock();

  /// Overrides the active step's current and power factor via the load map.
  void set_load_percent(std::optional<double> percent);

  EmulatedMeterState snapshot() const;
  std::vector<std::uint16_t> register_image() const;
  double true_power() const;
  double elapsed() const;

  /// Processes one RTU request. Returns nullopt when the request must be
  /// silently dropped (bad checksum, other unit).
  std::optional<modbus::Bytes> handle_request(std::span<const std::uint8_t> request);

  const modbus::RegisterMap& map() const { return map_; }
  std::uint8_t unit_id() const { return unit_id_; }

 private:
  struct Draw {
    double voltage, current, power_factor;
    LoadCharacter load;
  };
  Draw active_draw() const;
  void step_locked(double dt);
  void refresh_registers();

  LoadProfile profile_;
  ErrorModel error_;
  modbus::RegisterMap map_;
  std::uint8_t unit_id_;
  const Clock* clock_;
  double clock_origin_ = 0.0;

  mutable std::mutex mu_;
  EmulatedMeterState state_;
  std::optional<double> load_percent_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
};

struct CalibrationResult {
  double provided_energy = 0.0;  // calibrator truth, J
  double reported_energy = 0.0;  // meter counter, J
};

/// Runs one reference point for its full duration on a fresh emulator.
CalibrationResult run_calibration_scenario(const CalibratorSetting& setting, const ErrorModel& error);

}  // namespace powerbench::emulator
