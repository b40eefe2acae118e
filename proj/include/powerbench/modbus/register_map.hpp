#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "powerbench/metrology.hpp"

namespace powerbench::modbus {

enum class Quantity {
  kVoltage,
  kCurrent,
  kFrequency,
  kPowerFactor,
  kActivePower,
  kReactivePower,
  kApparentPower,
  kActiveEnergy,
  kReactiveEnergy,
};

inline constexpr std::array kAllQuantities = {
    Quantity::kVoltage,       Quantity::kCurrent,       Quantity::kFrequency,
    Quantity::kPowerFactor,   Quantity::kActivePower,   Quantity::kReactivePower,
    Quantity::kApparentPower, Quantity::kActiveEnergy,  Quantity::kReactiveEnergy,
};

std::string_view to_string(Quantity q);
std::optional<Quantity> quantity_from_string(std::string_view name);

/// Exact rational multiplier: engineering value = raw * numerator / denominator.
struct Scale {
  std::int64_t numerator = 1;
  std::int64_t denominator = 1;

  /// Accepts "0.1", "100", "1/10".
  static Scale parse(std::string_view text);
  double apply(std::int64_t raw) const;
  std::int64_t to_raw(double value) const;  // rounded to nearest
  bool operator==(const Scale&) const = default;
};

struct RegisterEntry {
  Quantity quantity = Quantity::kVoltage;
  std::uint16_t address = 0;
  std::uint8_t words = 1;  // 1 or 2, two-word values are big-endian (high word first)
  Scale scale;
  bool is_signed = false;
  std::string unit;

  std::uint32_t end() const { return static_cast<std::uint32_t>(address) + words; }
};

/// A contiguous run of registers fetched with one request.
struct ReadBlock {
  std::uint16_t start = 0;
  std::uint16_t count = 0;
  bool operator==(const ReadBlock&) const = default;
};

class RegisterMap {
 public:
  RegisterMap() = default;
  /// Validates: every quantity once, words in {1,2}, positive scale, no overlaps.
  explicit RegisterMap(std::vector<RegisterEntry> entries);

  /// The documented project layout shared by the master and the emulator.
  static RegisterMap project_default();
  static RegisterMap load_file(const std::filesystem::path& path);
  static RegisterMap load_string(const std::string& yaml, const std::string& source = "<string>");

  const std::vector<RegisterEntry>& entries() const { return entries_; }
  const RegisterEntry& entry(Quantity q) const;

  /// Minimal request set: entries sorted by address, contiguous ones merged
  /// as long as a block stays within the 125-register limit.
  std::vector<ReadBlock> read_blocks() const;

  /// Highest mapped address + 1.
  std::uint32_t span_end() const;
  bool covers(std::uint16_t start, std::uint16_t count) const;

  /// Raw register image (indexed by address) to engineering values.
  /// The timestamp is left at zero.
  ElectricalSample decode(const std::map<std::uint16_t, std::uint16_t>& registers) const;
  /// Writes every quantity of `sample` into `image` (sized to span_end()).
  void encode(const ElectricalSample& sample, std::vector<std::uint16_t>& image) const;

 private:
  std::vector<RegisterEntry> entries_;
};

}  // namespace powerbench::modbus
