#include "powerbench/emulator/meter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace powerbench::emulator {

std::string_view to_string(LoadCharacter c) {
  switch (c) {
    case LoadCharacter::kResistive: return "resistive";
    case LoadCharacter::kInductive: return "inductive";
    case LoadCharacter::kCapacitive: return "capacitive";
  }
  return "resistive";
}

std::optional<LoadCharacter> load_character_from_string(std::string_view text) {
  if (text == "resistive") return LoadCharacter::kResistive;
  if (text == "inductive") return LoadCharacter::kInductive;
  if (text == "capacitive") return LoadCharacter::kCapacitive;
  return std::nullopt;
}

double CalibratorSetting::power_factor() const {
  return std::cos(phase_angle_deg * std::numbers::pi / 180.0);
}

double CalibratorSetting::reference_energy() const {
  return real_power(voltage, current, power_factor()) * duration;
}

void CalibratorSetting::validate() const {
  if (!(voltage >= 0.0) || !(current >= 0.0)) throw DomainError("calibrator voltage and current must be non-negative");
  if (!(duration > 0.0)) throw DomainError("calibrator duration must be positive");
  if (!(std::abs(phase_angle_deg) <= 90.0)) throw DomainError("phase angle must lie within [-90, 90] degrees");
  switch (load) {
    case LoadCharacter::kResistive:
      if (phase_angle_deg != 0.0) throw DomainError("a resistive load has zero phase angle");
      break;
    case LoadCharacter::kInductive:
      if (!(phase_angle_deg > 0.0)) throw DomainError("an inductive (lagging) load needs a positive phase angle");
      break;
    case LoadCharacter::kCapacitive:
      if (!(phase_angle_deg < 0.0)) throw DomainError("a capacitive (leading) load needs a negative phase angle");
      break;
  }
}

void ErrorModel::validate() const {
  if (!(std::abs(gain_error) < 0.1)) throw DomainError("|gain error| must stay below 0.1");
  if (!(noise_sd >= 0.0)) throw DomainError("noise sd must be non-negative");
  if (!(starting_current_threshold >= 0.0)) throw DomainError("starting current threshold must be non-negative");
}

LoadProfile LoadProfile::constant(double voltage, double current, double power_factor, double duration,
                                  LoadCharacter load) {
  LoadProfile p;
  p.steps.push_back({duration, voltage, current, power_factor, load});
  return p;
}

LoadProfile LoadProfile::from_setting(const CalibratorSetting& s) {
  s.validate();
  return constant(s.voltage, s.current, s.power_factor(), s.duration, s.load);
}

void LoadProfile::validate() const {
  if (steps.empty()) throw DomainError("load profile needs at least one step");
  for (const auto& st : steps) {
    if (!(st.duration > 0.0)) throw DomainError("profile step durations must be positive");
    if (!(st.voltage >= 0.0) || !(st.current >= 0.0)) throw DomainError("profile voltage and current must be non-negative");
    if (!(std::abs(st.power_factor) <= 1.0)) throw DomainError("profile |power factor| must not exceed 1");
  }
  for (std::size_t i = 0; i < load_map.size(); ++i) {
    const auto& lp = load_map[i];
    if (!(lp.current >= 0.0) || !(std::abs(lp.power_factor) <= 1.0)) throw DomainError("invalid load map point");
    if (i > 0 && !(lp.percent > load_map[i - 1].percent))
      throw DomainError("load map percentages must be strictly increasing");
  }
  if (!(frequency >= 0.0)) throw DomainError("frequency must be non-negative");
}

LoadPoint LoadProfile::at_percent(double percent) const {
  if (load_map.empty()) throw std::logic_error("profile has no load map");
  if (percent <= load_map.front().percent) return load_map.front();
  if (percent >= load_map.back().percent) return load_map.back();
  auto hi = std::upper_bound(load_map.begin(), load_map.end(), percent,
                             [](double p, const LoadPoint& lp) { return p < lp.percent; });
  auto lo = hi - 1;
  const double f = (percent - lo->percent) / (hi->percent - lo->percent);
  return {percent, lo->current + f * (hi->current - lo->current),
          lo->power_factor + f * (hi->power_factor - lo->power_factor)};
}

MeterEmulator::MeterEmulator(LoadProfile profile, ErrorModel error, modbus::RegisterMap map, std::uint8_t unit_id,
                             const Clock* clock)
    : profile_(std::move(profile)),
      error_(error),
      map_(std::move(map)),
      unit_id_(unit_id),
      clock_(clock),
      rng_(error.seed) {
  profile_.validate();
  error_.validate();
  if (clock_) clock_origin_ = clock_->now();
  state_.image.assign(map_.span_end(), 0);
  refresh_registers();
}

MeterEmulator::Draw MeterEmulator::active_draw() const {
  const auto& st = profile_.steps[state_.step_index];
  Draw d{st.voltage, st.current, st.power_factor, st.load};
  if (load_percent_ && !profile_.load_map.empty()) {
    const auto lp = profile_.at_percent(*load_percent_);
    d.current = lp.current;
    d.power_factor = lp.power_factor;
  }
  return d;
}

void MeterEmulator::step(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("emulator step needs dt > 0");
  std::lock_guard lock(mu_);
  step_locked(dt);
}

void MeterEmulator::step_locked(double dt) {
  double remaining = dt;
  while (remaining > 0.0) {
    const bool last_step = state_.step_index + 1 >= profile_.steps.size();
    double sub = std::min(remaining, kMaxInternalStep);
    if (!last_step) sub = std::min(sub, profile_.steps[state_.step_index].duration - state_.elapsed_in_step);

    const auto d = active_draw();
    const double p = d.voltage * d.current * d.power_factor;
    const double q = d.voltage * d.current * std::sqrt(std::max(0.0, 1.0 - d.power_factor * d.power_factor));
    state_.true_energy_total += p * sub;
    if (d.current >= error_.starting_current_threshold) {
      state_.reported_energy_total += std::max(0.0, p * (1.0 + error_.gain_error)) * sub;
      state_.reported_reactive_energy_total += q * (1.0 + error_.gain_error) * sub;
    }

    state_.elapsed_in_step += sub;
    state_.elapsed_total += sub;
    remaining -= sub;
    if (!last_step && state_.elapsed_in_step >= profile_.steps[state_.step_index].duration - 1e-12) {
      ++state_.step_index;
      state_.elapsed_in_step = 0.0;
    }
    if (remaining < 1e-12) remaining = 0.0;
  }
  refresh_registers();
}

void MeterEmulator::refresh_registers() {
  const auto d = active_draw();
  auto& r = state_.reported;
  r.voltage = d.voltage;
  r.frequency = profile_.frequency;
  r.power_factor = d.power_factor;
  r.active_energy_total = state_.reported_energy_total;
  r.reactive_energy_total = state_.reported_reactive_energy_total;
  if (d.current < error_.starting_current_threshold) {
    r.current = 0.0;
    r.active_power = 0.0;
    r.reactive_power = 0.0;
    r.apparent_power = 0.0;
  } else {
    const double gain = 1.0 + error_.gain_error;
    const double sin_phi = std::sqrt(std::max(0.0, 1.0 - d.power_factor * d.power_factor));
    const double sign = d.load == LoadCharacter::kCapacitive ? -1.0 : 1.0;
    r.current = d.current;
    r.active_power = d.voltage * d.current * d.power_factor * gain;
    if (error_.noise_sd > 0.0) r.active_power += error_.noise_sd * noise_(rng_);
    r.reactive_power = sign * d.voltage * d.current * sin_phi * gain;
    r.apparent_power = std::max({d.voltage * d.current, std::abs(r.active_power), std::abs(r.reactive_power)});
  }
  r.timestamp = state_.elapsed_total;
  map_.encode(r, state_.image);
}

void MeterEmulator::advance_to(double t) {
  std::lock_guard lock(mu_);
  const double dt = t - state_.elapsed_total;
  if (dt > 1e-12) step_locked(dt);
}

void MeterEmulator::sync_to_clock() {
  if (clock_) advance_to(clock_->now() - clock_origin_);
}

void MeterEmulator::set_load_percent(std::optional<double> percent) {
  std::lock_guard lock(mu_);
  load_percent_ = percent;
  refresh_registers();
}

EmulatedMeterState MeterEmulator::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::vector<std::uint16_t> MeterEmulator::register_image() const {
  std::lock_guard lock(mu_);
  return state_.image;
}

double MeterEmulator::true_power() const {
  std::lock_guard lock(mu_);
  const auto d = active_draw();
  return d.voltage * d.current * d.power_factor;
}

double MeterEmulator::elapsed() const {
  std::lock_guard lock(mu_);
  return state_.elapsed_total;
}

std::optional<modbus::Bytes> MeterEmulator::handle_request(std::span<const std::uint8_t> request) {
  using namespace modbus;
  RequestFrame req;
  try {
    req = decode_request(request);
  } catch (const ModbusError&) {
    return std::nullopt;
  }
  if (req.unit_id != unit_id_) return std::nullopt;
  if (req.function != kReadHoldingRegisters)
    return encode_exception(unit_id_, req.function, ExceptionCode::kIllegalFunction);
  if (req.count < 1 || req.count > kMaxReadCount)
    return encode_exception(unit_id_, req.function, ExceptionCode::kIllegalDataValue);
  if (!map_.covers(req.start_address, req.count))
    return encode_exception(unit_id_, req.function, ExceptionCode::kIllegalDataAddress);

  sync_to_clock();
  std::lock_guard lock(mu_);
  const auto first = state_.image.begin() + req.start_address;
  const std::vector<std::uint16_t> words(first, first + req.count);
  return encode_read_response(unit_id_, words);
}

CalibrationResult run_calibration_scenario(const CalibratorSetting& setting, const ErrorModel& error) {
  MeterEmulator meter(LoadProfile::from_setting(setting), error);
  meter.step(setting.duration);
  const auto state = meter.snapshot();
  return {state.true_energy_total, state.reported_energy_total};
}

}  // namespace powerbench::emulator
