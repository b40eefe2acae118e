#include "powerbench/orchestrator/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <thread>

#include <spdlog/spdlog.h>

#include "powerbench/logger/control.hpp"
#include "powerbench/logger/csv.hpp"

namespace powerbench::orchestrator {

namespace {

std::string percent_text(double percent) {
  if (percent == std::floor(percent)) return std::to_string(static_cast<long long>(percent));
  std::string s = logger::format_number(percent);
  std::replace(s.begin(), s.end(), '.', '_');
  return s;
}

std::string regex_escape(const std::string& s) {
  static const std::regex special(R"([.^$|()\[\]{}*+?\\-])");
  return std::regex_replace(s, special, R"(\$&)");
}

// Fills summary, productivity and status from the recorded samples.
void assess(LoadPointResult& point, std::span<const ElectricalSample> samples, double warmup) {
  const auto kept = exclude_warmup(samples, warmup);
  if (kept.size() < 2) {
    point.status = PointStatus::kTooFewSamples;
    point.detail = std::to_string(kept.size()) + " samples after warmup";
    return;
  }
  point.summary = summarize(kept);
  if (point.summary->total_energy > 0.0) point.productivity = productivity(point.request_count, point.summary->total_energy);
}

GeneratorResult run_point_workload(Workload& workload, double rate, double duration, LoadPointResult& point) {
  try {
    return workload.run(rate, duration);
  } catch (const std::exception& e) {
    point.status = PointStatus::kFailed;
    point.detail = e.what();
    spdlog::warn("point {}: workload failed: {}", point.label, e.what());
    return {};
  }
}

void notify(const std::function<void(double)>& fn, double percent) {
  if (fn) fn(percent);
}

}  // namespace

std::vector<ElectricalSample> exclude_warmup(std::span<const ElectricalSample> samples, double warmup) {
  std::vector<ElectricalSample> out;
  for (const auto& s : samples)
    if (s.timestamp >= warmup) out.push_back(s);
  return out;
}

double point_rate(double percent, double max_rate) { return max_rate * percent / 100.0; }

std::string point_label(const TestPlan& plan, double percent) { return plan.label + "-p" + percent_text(percent); }

std::vector<LoadPointResult> run_remote_launch(const TestPlan& plan, Workload& workload, logger::PowerLogger& logger,
                                               const CampaignHooks& hooks) {
  plan.validate();
  if (!plan.max_rate) throw std::invalid_argument("run_remote_launch needs a calibrated max_rate");
  if (logger.mode() == logger::Mode::kLogging)
    throw logger::LoggerError(logger::LoggerError::Code::kAlreadyLogging, "logger is already logging");

  std::vector<LoadPointResult> results;
  for (double percent : plan.ladder) {
    LoadPointResult point;
    point.percent = percent;
    point.label = point_label(plan, percent);
    point.target_rate = point_rate(percent, *plan.max_rate);
    spdlog::info("point {}: {} req/s for {} s", point.label, point.target_rate, plan.point_duration);

    notify(hooks.on_point_start, percent);
    logger.start_logging(point.label);
    const auto gen = run_point_workload(workload, point.target_rate, plan.point_duration, point);
    auto session = logger.stop_logging();
    notify(hooks.on_point_end, percent);

    point.request_count = gen.request_count;
    point.errors = gen.errors;
    point.achieved_rate = gen.achieved_rate;
    if (session.csv_path) point.csv_path = session.csv_path->string();
    if (point.status == PointStatus::kOk) assess(point, session.record.samples, plan.warmup);
    results.push_back(std::move(point));
  }
  return results;
}

std::vector<std::filesystem::path> find_sessions(const std::filesystem::path& dir, const std::string& label) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  const std::regex pattern("^" + regex_escape(label) + R"(-\d{8}T\d{6}Z-[0-9a-f]{8}\.csv$)");
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), pattern))
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LoadPointResult> run_local_with_remote_logging(const TestPlan& plan, Workload& workload,
                                                           const net::Endpoint& controller,
                                                           const std::filesystem::path& session_dir,
                                                           const CampaignHooks& hooks) {
  plan.validate();
  if (!plan.max_rate) throw std::invalid_argument("run_local_with_remote_logging needs a calibrated max_rate");

  std::vector<LoadPointResult> results;
  for (double percent : plan.ladder) {
    LoadPointResult point;
    point.percent = percent;
    point.label = point_label(plan, percent);
    point.target_rate = point_rate(percent, *plan.max_rate);
    spdlog::info("point {}: {} req/s for {} s", point.label, point.target_rate, plan.point_duration);

    notify(hooks.on_point_start, percent);
    auto send = [&](const logger::ControlCommand& cmd) {
      try {
        logger::send_control(controller, cmd);
      } catch (const std::exception& e) {
        spdlog::warn("point {}: controller {} unreachable: {}", point.label, controller.to_string(), e.what());
      }
    };
    send({logger::Verb::kStart, point.label});
    const auto gen = run_point_workload(workload, point.target_rate, plan.point_duration, point);
    send({logger::Verb::kStop, std::nullopt});
    notify(hooks.on_point_end, percent);

    point.request_count = gen.request_count;
    point.errors = gen.errors;
    point.achieved_rate = gen.achieved_rate;
    std::this_thread::sleep_for(std::chrono::duration<double>(plan.settle));

    const auto files = find_sessions(session_dir, point.label);
    if (files.size() == 1) {
      point.csv_path = files.front().string();
      if (point.status == PointStatus::kOk) {
        try {
          const auto samples = logger::parse_csv_file(files.front());
          assess(point, samples, plan.warmup);
        } catch (const std::exception& e) {
          point.status = PointStatus::kUnmatched;
          point.detail = std::string("unreadable session: ") + e.what();
        }
      }
    } else if (point.status == PointStatus::kOk) {
      point.status = files.empty() ? PointStatus::kUnmatched : PointStatus::kPairingError;
      point.detail = files.empty() ? "no session labelled " + point.label
                                   : std::to_string(files.size()) + " sessions labelled " + point.label;
      spdlog::warn("point {}: {}", point.label, point.detail);
    }
    results.push_back(std::move(point));
  }
  return results;
}

}  // namespace powerbench::orchestrator
