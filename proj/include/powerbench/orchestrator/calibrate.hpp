#pragma once

#include <stdexcept>
#include <vector>

#include "powerbench/logger/power_logger.hpp"
#include "powerbench/orchestrator/http_load.hpp"
#include "powerbench/orchestrator/plan.hpp"

namespace powerbench::orchestrator {

class TargetUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Probe {
  double target_rate = 0.0;
  GeneratorResult result;
  bool sustained = false;
};

struct MaxLoadResult {
  double max_rate = 0.0;
  std::vector<Probe> probes;
};

/// Finds the 100% load point. Probes double from `start_rate` until one
/// fails to sustain `threshold` x target over a full probe window, then
/// narrow the bracket between the last sustained and the first failed rate
/// until the probe budget is spent. Each narrowing step first tries the rate
/// the failed probe actually achieved and falls back to the midpoint. The result is the achieved rate of the highest
/// sustained probe (never above its target).
///
/// Throws TargetUnreachable when the first probe completes no request.
/// If `logger` is given it must be idle (AlreadyLogging otherwise).
MaxLoadResult calibrate_max_load(LoadGenerator& generator, const CalibrationOptions& options = {},
                                 const logger::PowerLogger* logger = nullptr);

}  // namespace powerbench::orchestrator
