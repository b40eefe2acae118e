#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "powerbench/logger/power_logger.hpp"
#include "powerbench/net.hpp"
#include "powerbench/orchestrator/plan.hpp"

namespace powerbench::orchestrator {

/// Called around every ladder point, e.g. to couple an emulated meter's
/// load to the offered load.
struct CampaignHooks {
  std::function<void(double percent)> on_point_start;
  std::function<void(double percent)> on_point_end;
};

/// Samples with timestamp >= warmup.
std::vector<ElectricalSample> exclude_warmup(std::span<const ElectricalSample> samples, double warmup);

/// Rate for a ladder point: percent of max_rate.
double point_rate(double percent, double max_rate);

/// "<plan label>-p<percent>"
std::string point_label(const TestPlan& plan, double percent);

/// Use case A: the controller logs locally and launches the workload.
/// Needs `plan.max_rate`. Aborts with LoggerError when the logger is busy;
/// a failing workload only marks its point.
std::vector<LoadPointResult> run_remote_launch(const TestPlan& plan, Workload& workload,
                                               logger::PowerLogger& logger, const CampaignHooks& hooks = {});

/// Use case B: acts as the SUT-side script. Sends "start <label>", runs the
/// workload, sends "stop", then pairs each point with the session file in
/// `session_dir` whose name carries its label.
std::vector<LoadPointResult> run_local_with_remote_logging(const TestPlan& plan, Workload& workload,
                                                           const net::Endpoint& controller,
                                                           const std::filesystem::path& session_dir,
                                                           const CampaignHooks& hooks = {});

/// Session files in `dir` belonging to `label`.
std::vector<std::filesystem::path> find_sessions(const std::filesystem::path& dir, const std::string& label);

}  // namespace powerbench::orchestrator
