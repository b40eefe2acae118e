#pragma once

#include <chrono>
#include <mutex>
#include <stop_token>

namespace powerbench {

/// Monotonic time source in seconds. Poll loops, the emulator and the logger
/// all read the same clock so a simulated clock can drive a whole pipeline.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
  /// Blocks until `deadline` or until `stop` is requested. Returns false if stopped.
  virtual bool sleep_until(double deadline, std::stop_token stop = {}) = 0;
};

class SteadyClock final : public Clock {
 public:
  SteadyClock();
  double now() const override;
  bool sleep_until(double deadline, std::stop_token stop = {}) override;

 private:
  std::chrono::steady_clock::time_point epoch_;
};

/// Virtual time: sleeping jumps straight to the deadline.
class SimulatedClock final : public Clock {
 public:
  explicit SimulatedClock(double start = 0.0) : now_(start) {}
  double now() const override;
  bool sleep_until(double deadline, std::stop_token stop = {}) override;
  void advance(double seconds);

 private:
  mutable std::mutex mu_;
  double now_;
};

}  // namespace powerbench
