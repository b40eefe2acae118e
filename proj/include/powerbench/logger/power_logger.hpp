#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "powerbench/clock.hpp"
#include "powerbench/logger/control.hpp"
#include "powerbench/logger/csv.hpp"
#include "powerbench/metrology.hpp"
#include "powerbench/modbus/master.hpp"

namespace powerbench::logger {

enum class Mode { kIdle, kLogging };

class LoggerError : public std::runtime_error {
 public:
  enum class Code { kAlreadyLogging, kNotLogging };
  LoggerError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct LoggerOptions {
  /// When unset, sessions stay in memory only.
  std::optional<std::filesystem::path> output_dir;
  double sample_interval = 1.0;
  /// Written as "# ..." lines at the top of every session CSV.
  std::vector<std::string> csv_comments;
};

struct FinishedSession {
  SessionRecord record;
  std::optional<SessionSummary> summary;
  std::string status;  // "ok" or "too few samples"
  std::optional<std::filesystem::path> csv_path;
  double start_time = 0.0;  // monotonic clock
  double end_time = 0.0;
};

/// `<label>-<YYYYMMDDTHHMMSSZ>-<session id>.csv`
std::string session_file_name(const std::string& label, std::chrono::system_clock::time_point started_at,
                              const std::string& session_id);

/// Two-state logging controller. It is the poll loop's sample sink; every
/// state transition and sample append is serialized on one mutex.
class PowerLogger final : public modbus::SampleSink {
 public:
  PowerLogger(const Clock& clock, LoggerOptions options);

  /// Opens a session and its CSV (header written at once). Throws AlreadyLogging.
  std::string start_logging(const std::string& label = "");
  /// Closes the session. Throws NotLogging.
  FinishedSession stop_logging();

  /// Control-protocol entry: duplicate starts and stray stops are ignored
  /// with a warning. Returns true when the state changed.
  bool apply(const ControlCommand& command);
  /// Raw protocol line; unparseable lines are logged and ignored.
  bool apply_line(const std::string& line);

  void on_sample(const ElectricalSample& sample) override;
  void on_gap() override;

  Mode mode() const;
  long long gap_count() const;
  std::size_t active_sample_count() const;
  std::vector<FinishedSession> finished_sessions() const;

 private:
  FinishedSession finish_locked();

  const Clock& clock_;
  LoggerOptions options_;
  mutable std::mutex mu_;
  Mode mode_ = Mode::kIdle;
  std::optional<SessionRecord> active_;
  double active_start_ = 0.0;
  CsvSessionWriter writer_;
  long long gap_count_ = 0;
  std::vector<FinishedSession> finished_;
  std::mt19937_64 id_rng_;
};

}  // namespace powerbench::logger
