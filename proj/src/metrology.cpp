#include "powerbench/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace powerbench {

void validate(const ElectricalSample& s, double tolerance) {
  if (!(s.timestamp >= 0.0)) throw DomainError("timestamp must be non-negative");
  if (!(s.voltage >= 0.0)) throw DomainError("voltage must be non-negative");
  if (!(s.current >= 0.0)) throw DomainError("current must be non-negative");
  if (!(s.frequency >= 0.0)) throw DomainError("frequency must be non-negative");
  if (!(std::abs(s.power_factor) <= 1.0)) throw DomainError("|power factor| exceeds 1");
  const double eps = tolerance * std::max(1.0, std::abs(s.apparent_power));
  if (s.apparent_power < std::abs(s.active_power) - eps)
    throw DomainError("apparent power below |active power|");
  if (s.apparent_power < std::abs(s.reactive_power) - eps)
    throw DomainError("apparent power below |reactive power|");
}

double real_power(double voltage, double current, double power_factor) {
  if (!(std::abs(power_factor) <= 1.0))
    throw DomainError("|power factor| must not exceed 1, got " + std::to_string(power_factor));
  if (!(voltage >= 0.0) || !(current >= 0.0))
    throw DomainError("voltage and current must be non-negative");
  return voltage * current * power_factor;
}

double integrate_energy(std::span<const ElectricalSample> samples) {
  if (samples.empty()) throw std::invalid_argument("integrate_energy needs at least one sample");
  double energy = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].timestamp - samples[i - 1].timestamp;
    if (!(dt > 0.0))
      throw std::invalid_argument("sample timestamps must be strictly increasing (index " +
                                  std::to_string(i) + ")");
    energy += samples[i - 1].active_power * dt;
  }
  return energy;
}

SessionSummary summarize(std::span<const ElectricalSample> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("too few samples: a summary needs at least 2, got " +
                                std::to_string(samples.size()));
  SessionSummary out;
  out.sample_count = samples.size();
  out.total_energy = integrate_energy(samples);
  out.duration = samples.back().timestamp - samples.front().timestamp;

  // Two-pass population variance; the spread is tiny next to the mean.
  double sum = 0.0;
  for (const auto& s : samples) sum += s.active_power;
  out.mean_power = sum / static_cast<double>(samples.size());
  double sq = 0.0;
  for (const auto& s : samples) {
    const double d = s.active_power - out.mean_power;
    sq += d * d;
  }
  out.power_variance = sq / static_cast<double>(samples.size());
  return out;
}

SessionSummary summarize(const SessionRecord& session) { return summarize(session.samples); }

double relative_error(double measured, double reference) {
  if (reference == 0.0) throw DomainError("relative error against a zero reference");
  return (measured - reference) / reference;
}

double productivity(long long request_count, double total_energy) {
  if (!(total_energy > 0.0)) throw DomainError("productivity needs positive energy");
  return static_cast<double>(request_count) / total_energy;
}

}  // namespace powerbench
