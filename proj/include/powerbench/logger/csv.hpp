#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "powerbench/metrology.hpp"

namespace powerbench::logger {

inline constexpr std::array<std::string_view, 10> kCsvColumns = {
    "timestamp_s",    "voltage_V",          "current_A",         "frequency_Hz",    "power_factor",
    "active_power_W", "reactive_power_var", "apparent_power_VA", "active_energy_J", "reactive_energy_vars",
};

/// Header line without terminator.
std::string csv_header();

/// Shortest decimal that parses back to the same double, always with a
/// decimal point: 230 -> "230.0", 0.1 -> "0.1".
std::string format_number(double value);

std::string csv_row(const ElectricalSample& sample);

/// Header row, one row per sample, LF terminators. `comments` become leading
/// "# ..." lines, which parse_csv skips.
void write_csv(const SessionRecord& session, std::ostream& out, const std::vector<std::string>& comments = {});
void write_csv(const SessionRecord& session, const std::filesystem::path& destination,
               const std::vector<std::string>& comments = {});

/// Throws std::runtime_error with the offending line number on malformed input.
std::vector<ElectricalSample> parse_csv(std::istream& in);
std::vector<ElectricalSample> parse_csv_file(const std::filesystem::path& path);

/// Incremental writer: the header goes out on open() so a crash still
/// leaves a readable partial log.
class CsvSessionWriter {
 public:
  void open(const std::filesystem::path& path, const std::vector<std::string>& comments = {});
  void append(const ElectricalSample& sample);
  void close();
  bool is_open() const { return out_.is_open(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace powerbench::logger
