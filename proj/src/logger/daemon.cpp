#include "powerbench/logger/daemon.hpp"

#include <spdlog/spdlog.h>

namespace powerbench::logger {

LoggerDaemon::LoggerDaemon(std::unique_ptr<modbus::ByteStream> meter, modbus::RegisterMap map, Clock& clock,
                           DaemonOptions options)
    : meter_(std::move(meter)),
      map_(std::move(map)),
      clock_(clock),
      options_(std::move(options)),
      logger_(clock, [this] {
        auto lo = options_.logger;
        lo.sample_interval = options_.poll.interval;
        return lo;
      }()) {}

LoggerDaemon::~LoggerDaemon() { shutdown(); }

void LoggerDaemon::start() {
  control_ = std::make_unique<ControlServer>(
      options_.control, [this](const std::string& line) { logger_.apply_line(line); }, options_.datagram);
  control_->start();
  spdlog::info("control endpoint listening on {}:{}", options_.control.host, control_->port());

  poll_thread_ = std::jthread([this](std::stop_token stop) {
    try {
      modbus::poll(*meter_, map_, clock_, logger_, options_.poll, stop);
    } catch (const std::exception& e) {
      {
        std::lock_guard lock(failure_mu_);
        failure_ = e.what();
      }
      failed_ = true;
      spdlog::error("meter polling stopped: {}", e.what());
    }
  });
}

void LoggerDaemon::shutdown() {
  poll_thread_.request_stop();
  if (poll_thread_.joinable()) poll_thread_.join();
  if (control_) control_->stop();
  if (logger_.mode() == Mode::kLogging) logger_.stop_logging();
}

std::uint16_t LoggerDaemon::control_port() const { return control_ ? control_->port() : 0; }

std::optional<std::uint16_t> LoggerDaemon::datagram_port() const {
  return control_ ? control_->datagram_port() : std::nullopt;
}

std::string LoggerDaemon::failure() const {
  std::lock_guard lock(failure_mu_);
  return failure_;
}

}  // namespace powerbench::logger
