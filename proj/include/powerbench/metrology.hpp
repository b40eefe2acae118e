#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace powerbench {

/// Raised when a physical quantity falls outside its valid domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One timestamped meter reading. Energies are the meter's lifetime counters.
struct ElectricalSample {
  double timestamp = 0.0;  // seconds since session start
  double voltage = 0.0;    // V
  double current = 0.0;    // A
  double frequency = 0.0;  // Hz
  double power_factor = 0.0;
  double active_power = 0.0;          // W
  double reactive_power = 0.0;        // var
  double apparent_power = 0.0;        // VA
  double active_energy_total = 0.0;   // J
  double reactive_energy_total = 0.0; // var*s

  bool operator==(const ElectricalSample&) const = default;
};

/// Checks the per-sample bounds. `tolerance` is relative to apparent power.
/// Throws DomainError naming the first violated bound.
void validate(const ElectricalSample& sample, double tolerance = 1e-6);

struct SessionRecord {
  std::string session_id;
  std::chrono::system_clock::time_point started_at{};
  std::vector<ElectricalSample> samples;
  double sample_interval = 1.0;
  std::map<std::string, std::string> metadata;
};

struct SessionSummary {
  double duration = 0.0;
  double mean_power = 0.0;
  double power_variance = 0.0;
  double total_energy = 0.0;
  std::size_t sample_count = 0;
};

inline constexpr double kJoulesPerWattHour = 3600.0;

/// Real AC power, U * I * cos(phi).
double real_power(double voltage, double current, double power_factor);

/// Left-point rectangular integral of active power over consecutive samples.
/// A single sample integrates to zero.
double integrate_energy(std::span<const ElectricalSample> samples);

/// Population statistics of active power plus the integrated energy.
/// Sessions with fewer than two samples are rejected.
SessionSummary summarize(std::span<const ElectricalSample> samples);
SessionSummary summarize(const SessionRecord& session);

/// Signed (measured - reference) / reference.
double relative_error(double measured, double reference);

/// Requests per joule, numerically equal to req/s per watt.
double productivity(long long request_count, double total_energy);

}  // namespace powerbench
