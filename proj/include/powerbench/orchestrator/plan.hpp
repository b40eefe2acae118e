#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "powerbench/meter_config.hpp"
#include "powerbench/metrology.hpp"
#include "powerbench/net.hpp"
#include "powerbench/orchestrator/http_load.hpp"
#include "powerbench/orchestrator/runner.hpp"

namespace powerbench::orchestrator {

enum class WorkloadKind { kExternalCommand, kBuiltinHttp };

/// An external command is expanded with {target}, {duration} and {rate}; it
/// may report its counts by printing "requests=<n>" and "errors=<n>".
struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kBuiltinHttp;
  std::string command_template;
  std::string target = "http://127.0.0.1:8080/";
  double timeout = 1.0;
  int connections = 4;
};

enum class UseCase { kRemoteLaunch, kLocalWithRemoteLogging };

std::string to_string(UseCase u);
std::optional<UseCase> use_case_from_string(const std::string& text);

struct CalibrationOptions {
  double start_rate = 10.0;
  double probe_duration = 2.0;
  int max_probes = 12;
  double threshold = 0.95;  // achieved / target needed to count as sustained
};

struct TestPlan {
  UseCase use_case = UseCase::kRemoteLaunch;
  std::string label = "campaign";
  WorkloadSpec workload;
  RemoteRunner runner;
  std::vector<double> ladder{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  double point_duration = 60.0;
  double warmup = 5.0;
  std::optional<double> max_rate;  // skips calibration when set
  CalibrationOptions calibration;
  net::Endpoint controller{"127.0.0.1", 9595};
  double settle = 0.5;  // wait after "stop" before looking for the session file
  MeterConfig meter;
  double poll_interval = 1.0;

  void validate() const;
  static TestPlan load_file(const std::filesystem::path& path);
  static TestPlan load_string(const std::string& yaml, const std::string& source = "<string>");
};

class WorkloadFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Offered load for one ladder point. Throws WorkloadFailed when the
/// generator itself fails (non-zero exit, timeout).
class Workload {
 public:
  virtual ~Workload() = default;
  virtual GeneratorResult run(double rate, double duration) = 0;
};

class HttpWorkload final : public Workload {
 public:
  explicit HttpWorkload(const WorkloadSpec& spec);
  GeneratorResult run(double rate, double duration) override;

 private:
  WorkloadSpec spec_;
};

class CommandWorkload final : public Workload {
 public:
  CommandWorkload(const WorkloadSpec& spec, RemoteRunner runner);
  GeneratorResult run(double rate, double duration) override;

 private:
  WorkloadSpec spec_;
  RemoteRunner runner_;
};

std::unique_ptr<Workload> make_workload(const WorkloadSpec& spec, const RemoteRunner& runner);

/// Adapts a Workload to the calibration search.
class WorkloadGenerator final : public LoadGenerator {
 public:
  explicit WorkloadGenerator(Workload& w) : workload_(w) {}
  GeneratorResult generate(double rate, double duration) override { return workload_.run(rate, duration); }

 private:
  Workload& workload_;
};

enum class PointStatus { kOk, kFailed, kUnmatched, kPairingError, kTooFewSamples };

std::string to_string(PointStatus s);
std::optional<PointStatus> point_status_from_string(const std::string& text);

struct LoadPointResult {
  double percent = 0.0;
  std::string label;
  double target_rate = 0.0;
  double achieved_rate = 0.0;
  long long request_count = 0;
  long long errors = 0;
  std::optional<SessionSummary> summary;
  double productivity = 0.0;  // request_count / summary->total_energy
  PointStatus status = PointStatus::kOk;
  std::string detail;
  std::string csv_path;
};

}  // namespace powerbench::orchestrator
