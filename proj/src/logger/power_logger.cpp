#include "powerbench/logger/power_logger.hpp"

#include <ctime>
#include <sstream>

#include <spdlog/spdlog.h>

namespace powerbench::logger {

namespace {

std::string basic_iso8601(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &utc);
  return buf;
}

}  // namespace

std::string session_file_name(const std::string& label, std::chrono::system_clock::time_point started_at,
                              const std::string& session_id) {
  return (label.empty() ? std::string("session") : label) + "-" + basic_iso8601(started_at) + "-" + session_id +
         ".csv";
}

PowerLogger::PowerLogger(const Clock& clock, LoggerOptions options)
    : clock_(clock), options_(std::move(options)), id_rng_(std::random_device{}()) {
  if (options_.output_dir) std::filesystem::create_directories(*options_.output_dir);
}

std::string PowerLogger::start_logging(const std::string& label) {
  std::lock_guard lock(mu_);
  if (mode_ == Mode::kLogging) throw LoggerError(LoggerError::Code::kAlreadyLogging, "already logging");
  if (!label.empty() && !is_valid_label(label)) throw std::invalid_argument("invalid session label '" + label + "'");

  char id[9];
  std::snprintf(id, sizeof(id), "%08llx", static_cast<unsigned long long>(id_rng_() & 0xFFFFFFFFull));

  SessionRecord rec;
  rec.session_id = id;
  rec.started_at = std::chrono::system_clock::now();
  rec.sample_interval = options_.sample_interval;
  rec.metadata["label"] = label;
  rec.metadata["started_at"] = basic_iso8601(rec.started_at);

  if (options_.output_dir) {
    const auto path = *options_.output_dir / session_file_name(label, rec.started_at, rec.session_id);
    auto comments = options_.csv_comments;
    comments.push_back("session " + rec.session_id + " label=" + label + " started_at=" + rec.metadata["started_at"] +
                       " interval_s=" + format_number(rec.sample_interval));
    writer_.open(path, comments);
    rec.metadata["csv_path"] = path.string();
  }

  active_start_ = clock_.now();
  active_ = std::move(rec);
  mode_ = Mode::kLogging;
  spdlog::info("logging started: session {} label '{}'", active_->session_id, label);
  return active_->session_id;
}

FinishedSession PowerLogger::stop_logging() {
  std::lock_guard lock(mu_);
  if (mode_ != Mode::kLogging) throw LoggerError(LoggerError::Code::kNotLogging, "not logging");
  return finish_locked();
}

FinishedSession PowerLogger::finish_locked() {
  FinishedSession done;
  done.start_time = active_start_;
  done.end_time = clock_.now();
  done.record = std::move(*active_);
  active_.reset();
  mode_ = Mode::kIdle;
  if (writer_.is_open()) {
    done.csv_path = writer_.path();
    writer_.close();
  }
  if (done.record.samples.size() >= 2) {
    done.summary = summarize(done.record);
    done.status = "ok";
  } else {
    done.status = "too few samples";
  }
  spdlog::info("logging stopped: session {} with {} samples ({})", done.record.session_id,
               done.record.samples.size(), done.status);
  finished_.push_back(done);
  return done;
}

bool PowerLogger::apply(const ControlCommand& command) {
  try {
    if (command.verb == Verb::kStart) {
      start_logging(command.label.value_or(""));
    } else {
      stop_logging();
    }
    return true;
  } catch (const LoggerError& e) {
    spdlog::warn("ignoring '{}' command: {}", command.verb == Verb::kStart ? "start" : "stop", e.what());
    return false;
  }
}

bool PowerLogger::apply_line(const std::string& line) {
  const auto command = parse_command(line);
  if (!command) {
    spdlog::warn("ignoring unparseable control line ({} bytes)", line.size());
    return false;
  }
  return apply(*command);
}

void PowerLogger::on_sample(const ElectricalSample& sample) {
  std::lock_guard lock(mu_);
  if (mode_ != Mode::kLogging) return;
  ElectricalSample rebased = sample;
  rebased.timestamp = sample.timestamp - active_start_;
  if (rebased.timestamp < 0.0) return;  // taken before the start command arrived
  auto& samples = active_->samples;
  if (!samples.empty() && !(rebased.timestamp > samples.back().timestamp)) return;
  samples.push_back(rebased);
  if (writer_.is_open()) writer_.append(rebased);
}

void PowerLogger::on_gap() {
  std::lock_guard lock(mu_);
  ++gap_count_;
}

Mode PowerLogger::mode() const {
  std::lock_guard lock(mu_);
  return mode_;
}

long long PowerLogger::gap_count() const {
  std::lock_guard lock(mu_);
  return gap_count_;
}

std::size_t PowerLogger::active_sample_count() const {
  std::lock_guard lock(mu_);
  return active_ ? active_->samples.size() : 0;
}

std::vector<FinishedSession> PowerLogger::finished_sessions() const {
  std::lock_guard lock(mu_);
  return finished_;
}

}  // namespace powerbench::logger
