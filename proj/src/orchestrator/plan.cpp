#include "powerbench/orchestrator/plan.hpp"

#include <charconv>
#include <regex>

#include "powerbench/config.hpp"

namespace powerbench::orchestrator {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::optional<long long> last_count(const std::string& output, const std::string& key) {
  const std::regex re("(?:^|[^A-Za-z_])" + key + "=(\\d+)");
  std::optional<long long> found;
  for (auto it = std::sregex_iterator(output.begin(), output.end(), re); it != std::sregex_iterator(); ++it)
    found = std::stoll((*it)[1]);
  return found;
}

TestPlan from_config(const ConfigNode& root) {
  TestPlan plan;
  plan.label = root.get_or<std::string>("label", plan.label);
  if (auto u = root.find("use_case")) {
    auto uc = use_case_from_string(u->as<std::string>());
    if (!uc) u->fail("use_case must be remote-launch or local-remote-logging");
    plan.use_case = *uc;
  }
  if (auto l = root.find("ladder")) {
    if (!l->is_sequence()) l->fail("ladder must be a list of percentages");
    plan.ladder.clear();
    for (std::size_t i = 0; i < l->size(); ++i) plan.ladder.push_back((*l)[i].as<double>());
  }
  plan.point_duration = root.get_or<double>("point_duration", plan.point_duration);
  plan.warmup = root.get_or<double>("warmup", plan.warmup);
  if (auto m = root.find("max_rate")) plan.max_rate = m->as<double>();
  plan.poll_interval = root.get_or<double>("poll_interval", plan.poll_interval);
  plan.settle = root.get_or<double>("settle", plan.settle);
  if (auto c = root.find("controller")) {
    try {
      plan.controller = net::Endpoint::parse(c->as<std::string>());
    } catch (const net::NetError& e) {
      c->fail(e.what());
    }
  }
  if (auto c = root.find("calibration")) {
    plan.calibration.start_rate = c->get_or<double>("start_rate", plan.calibration.start_rate);
    plan.calibration.probe_duration = c->get_or<double>("probe_duration", plan.calibration.probe_duration);
    plan.calibration.max_probes = c->get_or<int>("max_probes", plan.calibration.max_probes);
    plan.calibration.threshold = c->get_or<double>("threshold", plan.calibration.threshold);
  }
  if (auto w = root.find("workload")) {
    const auto kind = w->get_or<std::string>("kind", "builtin_http");
    if (kind == "builtin_http") plan.workload.kind = WorkloadKind::kBuiltinHttp;
    else if (kind == "external_command") plan.workload.kind = WorkloadKind::kExternalCommand;
    else w->at("kind").fail("workload kind must be builtin_http or external_command");
    plan.workload.target = w->get_or<std::string>("target", plan.workload.target);
    plan.workload.command_template = w->get_or<std::string>("command", "");
    plan.workload.timeout = w->get_or<double>("timeout", plan.workload.timeout);
    plan.workload.connections = w->get_or<int>("connections", plan.workload.connections);
    if (plan.workload.kind == WorkloadKind::kExternalCommand && plan.workload.command_template.empty())
      w->fail("an external_command workload needs 'command'");
  }
  if (auto r = root.find("runner")) {
    const auto kind = r->get_or<std::string>("kind", "local_process");
    if (kind == "local_process") plan.runner.kind = RunnerKind::kLocalProcess;
    else if (kind == "remote_shell") plan.runner.kind = RunnerKind::kRemoteShell;
    else r->at("kind").fail("runner kind must be local_process or remote_shell");
    plan.runner.host = r->get_or<std::string>("host", "");
    plan.runner.shell_template = r->get_or<std::string>("shell_template", plan.runner.shell_template);
    plan.runner.timeout = r->get_or<double>("timeout", plan.runner.timeout);
    if (plan.runner.kind == RunnerKind::kRemoteShell && plan.runner.host.empty())
      r->fail("a remote_shell runner needs 'host'");
  }
  if (auto m = root.find("meter")) plan.meter = MeterConfig::from_node(*m);
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    root.fail(e.what());
  }
  return plan;
}

}  // namespace

std::string to_string(UseCase u) {
  return u == UseCase::kRemoteLaunch ? "remote-launch" : "local-remote-logging";
}

std::optional<UseCase> use_case_from_string(const std::string& text) {
  if (text == "remote-launch") return UseCase::kRemoteLaunch;
  if (text == "local-remote-logging") return UseCase::kLocalWithRemoteLogging;
  return std::nullopt;
}

void TestPlan::validate() const {
  if (ladder.empty()) throw std::invalid_argument("ladder must not be empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] >= 0.0 && ladder[i] <= 100.0)) throw std::invalid_argument("ladder percentages must lie in [0, 100]");
    if (i > 0 && !(ladder[i] > ladder[i - 1])) throw std::invalid_argument("ladder must be strictly increasing");
  }
  if (!(warmup >= 0.0)) throw std::invalid_argument("warmup must be non-negative");
  if (!(point_duration > warmup)) throw std::invalid_argument("point_duration must exceed warmup");
  if (max_rate && !(*max_rate >= 0.0)) throw std::invalid_argument("max_rate must be non-negative");
  if (!(poll_interval > 0.0)) throw std::invalid_argument("poll_interval must be positive");
  if (label.empty()) throw std::invalid_argument("label must not be empty");
  if (!(calibration.start_rate > 0.0) || !(calibration.probe_duration > 0.0) || calibration.max_probes < 1)
    throw std::invalid_argument("invalid calibration settings");
}

TestPlan TestPlan::load_file(const std::filesystem::path& path) { return from_config(ConfigNode::load_file(path)); }

TestPlan TestPlan::load_string(const std::string& yaml, const std::string& source) {
  return from_config(ConfigNode::load_string(yaml, source));
}

HttpWorkload::HttpWorkload(const WorkloadSpec& spec) : spec_(spec) { HttpTarget::parse(spec.target); }

GeneratorResult HttpWorkload::run(double rate, double duration) {
  return builtin_http_generate(spec_.target, rate, duration, {spec_.timeout, spec_.connections});
}

CommandWorkload::CommandWorkload(const WorkloadSpec& spec, RemoteRunner runner)
    : spec_(spec), runner_(std::move(runner)) {}

GeneratorResult CommandWorkload::run(double rate, double duration) {
  const auto command =
      substitute(spec_.command_template, {{"target", spec_.target}, {"duration", shortest(duration)}, {"rate", shortest(rate)}});
  const auto result = run_command(runner_, command);
  if (result.timed_out) throw WorkloadFailed("workload command timed out: " + command);
  if (result.exit_code != 0)
    throw WorkloadFailed("workload command exited with status " + std::to_string(result.exit_code));
  GeneratorResult r;
  r.request_count = last_count(result.output, "requests").value_or(0);
  r.errors = last_count(result.output, "errors").value_or(0);
  r.achieved_rate = static_cast<double>(r.request_count) / duration;
  return r;
}

std::unique_ptr<Workload> make_workload(const WorkloadSpec& spec, const RemoteRunner& runner) {
  if (spec.kind == WorkloadKind::kBuiltinHttp) return std::make_unique<HttpWorkload>(spec);
  return std::make_unique<CommandWorkload>(spec, runner);
}

std::string to_string(PointStatus s) {
  switch (s) {
    case PointStatus::kOk: return "ok";
    case PointStatus::kFailed: return "failed";
    case PointStatus::kUnmatched: return "unmatched";
    case PointStatus::kPairingError: return "pairing-error";
    case PointStatus::kTooFewSamples: return "too-few-samples";
  }
  return "failed";
}

std::optional<PointStatus> point_status_from_string(const std::string& text) {
  for (auto s : {PointStatus::kOk, PointStatus::kFailed, PointStatus::kUnmatched, PointStatus::kPairingError,
                 PointStatus::kTooFewSamples})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

}  // namespace powerbench::orchestrator
