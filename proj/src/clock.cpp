#include "powerbench/clock.hpp"

#include <algorithm>
#include <thread>

namespace powerbench {

SteadyClock::SteadyClock() : epoch_(std::chrono::steady_clock::now()) {}

double SteadyClock::now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_).count();
}

bool SteadyClock::sleep_until(double deadline, std::stop_token stop) {
  // Sleep in short slices so a stop request is noticed promptly.
  constexpr double kSlice = 0.05;
  for (;;) {
    if (stop.stop_requested()) return false;
    const double remaining = deadline - now();
    if (remaining <= 0.0) return true;
    std::this_thread::sleep_for(std::chrono::duration<double>(std::min(remaining, kSlice)));
  }
}

double SimulatedClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

bool SimulatedClock::sleep_until(double deadline, std::stop_token stop) {
  if (stop.stop_requested()) return false;
  std::lock_guard lock(mu_);
  if (deadline > now_) now_ = deadline;
  return true;
}

void SimulatedClock::advance(double seconds) {
  std::lock_guard lock(mu_);
  if (seconds > 0.0) now_ += seconds;
}

}  // namespace powerbench
