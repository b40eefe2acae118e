#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "powerbench/logger/control.hpp"
#include "powerbench/logger/power_logger.hpp"
#include "powerbench/modbus/master.hpp"

namespace powerbench::logger {

struct DaemonOptions {
  net::Endpoint control{"127.0.0.1", kDefaultControlPort};
  bool datagram = false;
  modbus::PollOptions poll;
  LoggerOptions logger;
};

/// The controller-side process: a poll loop feeding a PowerLogger, plus the
/// control server flipping it between idle and logging.
class LoggerDaemon {
 public:
  LoggerDaemon(std::unique_ptr<modbus::ByteStream> meter, modbus::RegisterMap map, Clock& clock,
               DaemonOptions options);
  ~LoggerDaemon();

  /// Binds the control endpoint (throws net::NetError) and starts both loops.
  void start();
  /// Stops both loops and finalizes any open session.
  void shutdown();

  PowerLogger& logger() { return logger_; }
  std::uint16_t control_port() const;
  std::optional<std::uint16_t> datagram_port() const;

  /// Set once the poll loop gave up on the meter.
  bool failed() const { return failed_; }
  std::string failure() const;

 private:
  std::unique_ptr<modbus::ByteStream> meter_;
  modbus::RegisterMap map_;
  Clock& clock_;
  DaemonOptions options_;
  PowerLogger logger_;
  std::unique_ptr<ControlServer> control_;
  std::jthread poll_thread_;
  std::atomic<bool> failed_{false};
  mutable std::mutex failure_mu_;
  std::string failure_;
};

}  // namespace powerbench::logger
