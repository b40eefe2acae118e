// powerbench: meter logger, control client, meter emulator, campaign driver
// and report generator in one binary.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>
#include <time.h>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "powerbench/analysis/accuracy.hpp"
#include "powerbench/analysis/compare.hpp"
#include "powerbench/analysis/timeseries.hpp"
#include "powerbench/cli_config.hpp"
#include "powerbench/emulator/scenario.hpp"
#include "powerbench/emulator/server.hpp"
#include "powerbench/logger/control.hpp"
#include "powerbench/logger/csv.hpp"
#include "powerbench/logger/daemon.hpp"
#include "powerbench/orchestrator/accuracy_suite.hpp"
#include "powerbench/orchestrator/calibrate.hpp"
#include "powerbench/orchestrator/campaign.hpp"
#include "powerbench/orchestrator/manifest.hpp"

namespace fs = std::filesystem;
using namespace powerbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Thrown for bad input that is the operator's fault.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::string> config_file;
  CliOverrides flags;
  std::string command_line;
};

CliConfig effective_config(const Globals& g) {
  CliConfig config;
  if (g.config_file) config.apply_file(*g.config_file);
  config.apply_process_env();
  g.flags.apply_to(config);
  config.validate();
  spdlog::set_level(spdlog::level::from_str(config.log_level));
  return config;
}

// Comment lines opening every file we write.
std::vector<std::string> header(const Globals& g, const CliConfig& config, const std::string& what) {
  std::vector<std::string> lines{"powerbench " + what, "command=" + g.command_line};
  for (auto& l : config.describe()) lines.push_back(l);
  return lines;
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::ofstream open_output(const fs::path& file) {
  ensure_parent(file);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

// Long-running commands block SIGINT/SIGTERM in every thread and collect
// them here instead, so shutdown runs on the main thread.
void block_termination_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

// Returns true on a signal, false when `give_up` turned true first.
template <typename Pred>
bool wait_for_signal(Pred give_up) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  const timespec slice{0, 200'000'000};
  for (;;) {
    const int sig = sigtimedwait(&set, nullptr, &slice);
    if (sig == SIGINT || sig == SIGTERM) {
      spdlog::info("signal {} received, shutting down", sig);
      return true;
    }
    if (give_up()) return false;
  }
}

// ---- logger ----

struct LoggerArgs {
  bool datagram = false;
};

int cmd_logger(const Globals& g, const LoggerArgs& args) {
  auto config = effective_config(g);
  if (args.datagram) config.datagram = true;
  block_termination_signals();

  SteadyClock clock;
  auto meter = open_meter(config.effective_meter(), clock);

  logger::DaemonOptions opts;
  opts.control = config.endpoint;
  opts.datagram = config.datagram;
  opts.poll.interval = config.poll_interval;
  opts.poll.response_timeout = config.response_timeout;
  opts.poll.unit_id = config.meter.unit_id;
  opts.logger.output_dir = config.output_dir;
  opts.logger.csv_comments = header(g, config, "logger");

  logger::LoggerDaemon daemon(std::move(meter.stream), meter.map, clock, opts);
  daemon.start();
  std::cout << "logger listening on " << config.endpoint.host << ':' << daemon.control_port()
            << (config.datagram ? " (tcp+udp)" : " (tcp)") << ", sessions in " << config.output_dir.string()
            << std::endl;
  const bool signalled = wait_for_signal([&] { return daemon.failed(); });
  daemon.shutdown();
  for (const auto& s : daemon.logger().finished_sessions())
    if (s.csv_path) std::cout << "session " << s.record.session_id << ": " << s.csv_path->string() << '\n';
  if (!signalled) {
    std::cerr << "logger: meter lost: " << daemon.failure() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

// ---- control ----

struct ControlArgs {
  std::string verb;
  std::string label;
  bool datagram = false;
};

int cmd_control(const Globals& g, const ControlArgs& args) {
  const auto config = effective_config(g);
  logger::ControlCommand cmd;
  cmd.verb = args.verb == "start" ? logger::Verb::kStart : logger::Verb::kStop;
  if (!args.label.empty()) {
    if (cmd.verb != logger::Verb::kStart) throw UsageError("--label only applies to start");
    if (!logger::is_valid_label(args.label)) throw UsageError("invalid label '" + args.label + "'");
    cmd.label = args.label;
  }
  try {
    logger::send_control(config.endpoint, cmd, args.datagram || config.datagram);
  } catch (const net::NetError& e) {
    std::cerr << "control: " << config.endpoint.to_string() << ": " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

// ---- emulate ----

struct EmulateArgs {
  std::string scenario = "desktop-ladder";
  std::string listen = "127.0.0.1:5020";
  std::optional<double> load_percent;
  bool offline = false;
  double interval = 0.01;
};

int cmd_emulate(const Globals& g, const EmulateArgs& args) {
  const auto config = effective_config(g);
  const auto path = emulator::resolve_scenario(args.scenario);
  const auto scenario = emulator::Scenario::load_file(path);
  const auto map = config.register_map.empty() ? modbus::RegisterMap::project_default()
                                               : modbus::RegisterMap::load_file(config.register_map);

  if (args.offline) {
    // Calibrator run in simulated time; writes the polled session.
    orchestrator::AccuracyRunOptions opts;
    opts.poll_interval = args.interval;
    opts.output_dir = config.output_dir;
    opts.csv_comments = header(g, config, "emulate " + scenario.name);
    const auto session = orchestrator::run_accuracy_scenario(scenario, opts);
    const auto rows = analysis::accuracy_report({{scenario.name, *scenario.calibrator, session.record, {}}});
    analysis::write_accuracy_table(rows, std::cout);
    if (session.csv_path) std::cout << "session: " << session.csv_path->string() << '\n';
    return kExitOk;
  }

  block_termination_signals();
  SteadyClock clock;
  emulator::MeterEmulator meter(scenario.profile, scenario.error, map, scenario.unit_id, &clock);
  if (args.load_percent) meter.set_load_percent(*args.load_percent);
  net::TcpListener listener(net::Endpoint::parse(args.listen));
  std::cout << "emulating '" << scenario.name << "' (unit " << int(scenario.unit_id) << ", gain "
            << scenario.error.gain_error << ") on " << net::Endpoint::parse(args.listen).host << ':'
            << listener.port() << std::endl;
  std::jthread server([&](std::stop_token stop) { emulator::serve_tcp(meter, listener, stop); });
  wait_for_signal([] { return false; });
  server.request_stop();
  return kExitOk;
}

// ---- campaign / calibrate ----

struct CampaignArgs {
  std::string plan;
  std::string use_case;
  std::string output;
  std::optional<double> max_rate;
  std::optional<double> local_stub;
  bool with_logger = false;
};

// Starts a local capped HTTP stub and points the workload at it.
std::unique_ptr<orchestrator::StubHttpServer> maybe_stub(const std::optional<double>& cap,
                                                         orchestrator::TestPlan& plan) {
  if (!cap) return nullptr;
  orchestrator::StubServerOptions so;
  so.rate_cap = *cap;
  auto stub = std::make_unique<orchestrator::StubHttpServer>(so);
  stub->start();
  plan.workload.kind = orchestrator::WorkloadKind::kBuiltinHttp;
  plan.workload.target = stub->url();
  spdlog::info("local stub capped at {} req/s on {}", *cap, stub->url());
  return stub;
}

void print_points(const std::vector<orchestrator::LoadPointResult>& points) {
  std::cout << "load%  target/s  achieved/s  requests  errors   mean W     energy J   req/J      status\n";
  for (const auto& p : points) {
    char line[256];
    std::snprintf(line, sizeof(line), "%5.0f  %8.1f  %10.1f  %8lld  %6lld  %8.2f  %10.1f  %-9.5g  %s\n", p.percent,
                  p.target_rate, p.achieved_rate, p.request_count, p.errors,
                  p.summary ? p.summary->mean_power : 0.0, p.summary ? p.summary->total_energy : 0.0, p.productivity,
                  orchestrator::to_string(p.status).c_str());
    std::cout << line;
  }
}

int cmd_campaign(const Globals& g, const CampaignArgs& args) {
  auto config = effective_config(g);
  auto plan = orchestrator::TestPlan::load_file(args.plan);
  if (!args.use_case.empty()) {
    auto uc = orchestrator::use_case_from_string(args.use_case);
    if (!uc) throw UsageError("--use-case must be remote-launch or local-remote-logging");
    plan.use_case = *uc;
  }
  if (args.max_rate) plan.max_rate = *args.max_rate;
  if (g.flags.meter) plan.meter = config.effective_meter();
  if (g.flags.register_map || !config.register_map.empty()) plan.meter.register_map = config.register_map;
  if (g.flags.poll_interval) plan.poll_interval = config.poll_interval;
  const fs::path out_dir = args.output.empty() ? config.output_dir : fs::path(args.output);
  fs::create_directories(out_dir);
  auto stub = maybe_stub(args.local_stub, plan);

  auto workload = orchestrator::make_workload(plan.workload, plan.runner);
  auto comments = header(g, config, "campaign " + plan.label);
  comments.push_back("plan=" + args.plan + " use_case=" + orchestrator::to_string(plan.use_case) +
                     " meter=" + plan.meter.to_uri());

  // The meter is logged in-process for remote-launch, and for
  // local-remote-logging when --with-logger stands in for the controller.
  const bool local_logger = plan.use_case == orchestrator::UseCase::kRemoteLaunch || args.with_logger;
  SteadyClock clock;
  std::optional<MeterConnection> meter;
  std::unique_ptr<logger::LoggerDaemon> daemon;
  orchestrator::CampaignHooks hooks;
  if (local_logger) {
    meter = open_meter(plan.meter, clock);
    logger::DaemonOptions opts;
    opts.control = plan.use_case == orchestrator::UseCase::kRemoteLaunch ? net::Endpoint{"127.0.0.1", 0}
                                                                         : plan.controller;
    opts.poll.interval = plan.poll_interval;
    opts.poll.response_timeout = config.response_timeout;
    opts.poll.unit_id = plan.meter.unit_id;
    opts.logger.output_dir = out_dir;
    opts.logger.csv_comments = comments;
    daemon = std::make_unique<logger::LoggerDaemon>(std::move(meter->stream), meter->map, clock, opts);
    daemon->start();
    if (auto* emu = meter->emulator.get()) {
      hooks.on_point_start = [emu](double percent) { emu->set_load_percent(percent); };
      hooks.on_point_end = [emu](double) { emu->set_load_percent(0.0); };
      emu->set_load_percent(0.0);
    }
  }

  if (!plan.max_rate) {
    orchestrator::WorkloadGenerator gen(*workload);
    const auto cal = orchestrator::calibrate_max_load(gen, plan.calibration, daemon ? &daemon->logger() : nullptr);
    std::cout << "calibrated maximum load: " << cal.max_rate << " req/s after " << cal.probes.size() << " probes\n";
    plan.max_rate = cal.max_rate;
  }
  comments.push_back("max_rate=" + logger::format_number(*plan.max_rate));

  std::vector<orchestrator::LoadPointResult> points;
  if (plan.use_case == orchestrator::UseCase::kRemoteLaunch) {
    points = orchestrator::run_remote_launch(plan, *workload, daemon->logger(), hooks);
  } else {
    net::Endpoint controller = plan.controller;
    if (daemon) controller.port = daemon->control_port();
    points = orchestrator::run_local_with_remote_logging(plan, *workload, controller, out_dir, hooks);
  }
  if (daemon) daemon->shutdown();

  const auto manifest = out_dir / (plan.label + "-manifest.csv");
  orchestrator::write_manifest(points, manifest, comments);
  print_points(points);
  std::cout << "manifest: " << manifest.string() << '\n';
  const bool all_ok = std::all_of(points.begin(), points.end(),
                                  [](const auto& p) { return p.status == orchestrator::PointStatus::kOk; });
  return all_ok ? kExitOk : kExitFailure;
}

struct CalibrateArgs {
  std::string plan;
  std::string target;
  std::optional<double> local_stub;
};

int cmd_calibrate(const Globals& g, const CalibrateArgs& args) {
  effective_config(g);
  orchestrator::TestPlan plan;
  if (!args.plan.empty()) plan = orchestrator::TestPlan::load_file(args.plan);
  if (!args.target.empty()) {
    plan.workload.kind = orchestrator::WorkloadKind::kBuiltinHttp;
    plan.workload.target = args.target;
  }
  auto stub = maybe_stub(args.local_stub, plan);
  auto workload = orchestrator::make_workload(plan.workload, plan.runner);
  orchestrator::WorkloadGenerator gen(*workload);
  try {
    const auto cal = orchestrator::calibrate_max_load(gen, plan.calibration);
    for (std::size_t i = 0; i < cal.probes.size(); ++i) {
      const auto& p = cal.probes[i];
      std::cout << "probe " << i + 1 << ": target " << p.target_rate << " req/s, achieved " << p.result.achieved_rate
                << (p.sustained ? " sustained" : " not sustained") << '\n';
    }
    std::cout << "max_rate " << cal.max_rate << '\n';
  } catch (const orchestrator::TargetUnreachable& e) {
    std::cerr << "calibrate: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

// ---- report ----

std::vector<fs::path> scenario_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (auto& f : emulator::list_scenarios(in)) files.push_back(f);
    } else if (fs::exists(in)) {
      files.emplace_back(in);
    } else if (fs::is_directory(emulator::bundled_scenario_dir() / in)) {
      for (auto& f : emulator::list_scenarios(emulator::bundled_scenario_dir() / in)) files.push_back(f);
    } else {
      files.push_back(emulator::resolve_scenario(in));
    }
  }
  if (files.empty()) throw UsageError("no scenario files found");
  return files;
}

struct AccuracyRun {
  std::vector<emulator::Scenario> scenarios;
  std::vector<analysis::AccuracyRow> rows;
};

AccuracyRun run_accuracy(const std::vector<fs::path>& files, double interval) {
  AccuracyRun run;
  std::vector<analysis::AccuracyInput> inputs;
  for (const auto& f : files) {
    auto sc = emulator::Scenario::load_file(f);
    if (!sc.calibrator) {
      spdlog::warn("{}: no calibrator block, skipped", f.string());
      continue;
    }
    orchestrator::AccuracyRunOptions opts;
    opts.poll_interval = interval;
    auto session = orchestrator::run_accuracy_scenario(sc, opts);
    inputs.push_back({sc.name, *sc.calibrator, std::move(session.record), {}});
    run.scenarios.push_back(std::move(sc));
  }
  run.rows = analysis::accuracy_report(inputs);
  return run;
}

struct ReportArgs {
  std::vector<std::string> scenarios;
  double interval = 0.01;
  std::string session;
  std::size_t window = 1;
  std::string manifest_a;
  std::string manifest_b;
  std::string label_a = "a";
  std::string label_b = "b";
  std::string output;
};

int cmd_report_accuracy(const Globals& g, const ReportArgs& args) {
  const auto config = effective_config(g);
  const auto run = run_accuracy(scenario_files(args.scenarios), args.interval);
  analysis::write_accuracy_table(run.rows, std::cout);
  if (!args.output.empty()) {
    auto out = open_output(args.output);
    analysis::write_accuracy_csv(run.rows, out, header(g, config, "report accuracy"));
  }
  return kExitOk;
}

int cmd_report_timeseries(const Globals& g, const ReportArgs& args) {
  const auto config = effective_config(g);
  const auto samples = logger::parse_csv_file(args.session);
  const auto points = analysis::export_timeseries(samples, args.window);
  auto comments = header(g, config, "report timeseries");
  comments.push_back("session=" + args.session + " window=" + std::to_string(args.window));
  if (args.output.empty()) {
    analysis::write_timeseries_csv(points, std::cout, comments);
  } else {
    auto out = open_output(args.output);
    analysis::write_timeseries_csv(points, out, comments);
  }
  return kExitOk;
}

int cmd_report_compare(const Globals& g, const ReportArgs& args) {
  const auto config = effective_config(g);
  const auto a = orchestrator::read_manifest(fs::path(args.manifest_a));
  const auto b = orchestrator::read_manifest(fs::path(args.manifest_b));
  try {
    const auto report = analysis::compare_campaigns(a, b, args.label_a, args.label_b);
    analysis::write_comparison_table(report, std::cout);
    if (!args.output.empty()) {
      auto out = open_output(args.output);
      analysis::write_comparison_csv(report, out, header(g, config, "report compare"));
    }
  } catch (const analysis::NoOverlap& e) {
    std::cerr << "compare: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

// ---- selftest ----

int cmd_selftest(const Globals& g, double interval) {
  effective_config(g);
  const auto dir = emulator::bundled_scenario_dir() / "table1";
  const auto run = run_accuracy(emulator::list_scenarios(dir), interval);
  analysis::write_accuracy_table(run.rows, std::cout);

  bool ok = run.rows.size() == run.scenarios.size() && !run.rows.empty();
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    const auto& ref = run.scenarios[i].reference;
    const auto& row = run.rows[i];
    if (ref.relative_error && std::abs(row.relative_energy_error - *ref.relative_error) > 0.0002) {
      std::cout << row.label << ": energy error " << row.relative_energy_error * 100 << "% differs from expected "
                << *ref.relative_error * 100 << "%\n";
      ok = false;
    }
    if (ref.mean_power && std::abs(row.mean_power - *ref.mean_power) > 0.005 * *ref.mean_power) {
      std::cout << row.label << ": mean power " << row.mean_power << " W differs from expected " << *ref.mean_power
                << " W\n";
      ok = false;
    }
  }
  std::cout << (ok ? "selftest PASS" : "selftest FAIL") << '\n';
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("powerbench"));

  Globals g;
  for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"Energy meter logging and server power benchmarking"};
  app.require_subcommand(1);
  app.add_option("-c,--config", g.config_file, "YAML config file")->check(CLI::ExistingFile);
  app.add_option("--endpoint", g.flags.endpoint, "logger control endpoint host:port");
  app.add_option("--meter", g.flags.meter, "meter URI: emulated:<scenario>, tcp:<host>:<port>, serial:<dev>[:<baud>]");
  app.add_option("--register-map", g.flags.register_map, "register map YAML file");
  app.add_option("--output-dir", g.flags.output_dir, "directory for session CSVs and reports");
  app.add_option("--poll-interval", g.flags.poll_interval, "seconds between meter reads")->check(CLI::PositiveNumber);
  app.add_option("--response-timeout", g.flags.response_timeout, "Modbus response timeout, s")
      ->check(CLI::PositiveNumber);
  app.add_option("--log-level", g.flags.log_level, "trace, debug, info, warn, error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));

  LoggerArgs logger_args;
  auto* logger_cmd = app.add_subcommand("logger", "poll the meter and log sessions on start/stop commands");
  logger_cmd->add_flag("--datagram", logger_args.datagram, "also accept commands as UDP datagrams");

  ControlArgs control_args;
  auto* control_cmd = app.add_subcommand("control", "send start or stop to a logger");
  control_cmd->add_option("verb", control_args.verb, "start or stop")->required()->check(CLI::IsMember({"start", "stop"}));
  control_cmd->add_option("--label", control_args.label, "session label (start only)");
  control_cmd->add_flag("--datagram", control_args.datagram, "send as a UDP datagram");

  EmulateArgs emulate_args;
  auto* emulate_cmd = app.add_subcommand("emulate", "serve an emulated meter over Modbus RTU on TCP");
  emulate_cmd->add_option("--scenario", emulate_args.scenario, "scenario name or file");
  emulate_cmd->add_option("--listen", emulate_args.listen, "host:port to serve on");
  emulate_cmd->add_option("--load-percent", emulate_args.load_percent, "drive the load map at this percentage");
  emulate_cmd->add_flag("--offline", emulate_args.offline,
                        "run the calibrator point in simulated time and write the session instead of serving");
  emulate_cmd->add_option("--interval", emulate_args.interval, "poll interval for --offline, s")
      ->check(CLI::PositiveNumber);

  CampaignArgs campaign_args;
  auto* campaign_cmd = app.add_subcommand("campaign", "run a workload ladder and record power per point");
  campaign_cmd->add_option("--plan", campaign_args.plan, "plan YAML file")->required()->check(CLI::ExistingFile);
  campaign_cmd->add_option("--use-case", campaign_args.use_case, "remote-launch or local-remote-logging");
  campaign_cmd->add_option("--output", campaign_args.output, "output directory (default: --output-dir)");
  campaign_cmd->add_option("--max-rate", campaign_args.max_rate, "skip calibration and use this 100% rate");
  campaign_cmd->add_option("--local-stub", campaign_args.local_stub, "serve a local HTTP stub capped at this rate");
  campaign_cmd->add_flag("--with-logger", campaign_args.with_logger,
                         "local-remote-logging: run the controller's logger in this process");

  CalibrateArgs calibrate_args;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "find the maximum sustainable request rate");
  calibrate_cmd->add_option("--plan", calibrate_args.plan, "plan YAML file")->check(CLI::ExistingFile);
  calibrate_cmd->add_option("--target", calibrate_args.target, "HTTP target URL");
  calibrate_cmd->add_option("--local-stub", calibrate_args.local_stub, "serve a local HTTP stub capped at this rate");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "accuracy, time series and comparison reports");
  report_cmd->require_subcommand(1);
  auto* acc_cmd = report_cmd->add_subcommand("accuracy", "run calibrator scenarios and tabulate meter errors");
  acc_cmd->add_option("--scenarios", report_args.scenarios, "scenario files, directories or names")->required();
  acc_cmd->add_option("--interval", report_args.interval, "poll interval, s")->check(CLI::PositiveNumber);
  acc_cmd->add_option("-o,--output", report_args.output, "CSV output file");
  auto* ts_cmd = report_cmd->add_subcommand("timeseries", "export (t, P) pairs from a session CSV");
  ts_cmd->add_option("--session", report_args.session, "session CSV")->required()->check(CLI::ExistingFile);
  ts_cmd->add_option("--window", report_args.window, "samples per averaged point")->check(CLI::PositiveNumber);
  ts_cmd->add_option("-o,--output", report_args.output, "CSV output file (default stdout)");
  auto* cmp_cmd = report_cmd->add_subcommand("compare", "power and productivity ratios of two campaigns");
  cmp_cmd->add_option("a", report_args.manifest_a, "manifest a")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("b", report_args.manifest_b, "manifest b")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--label-a", report_args.label_a, "name of campaign a");
  cmp_cmd->add_option("--label-b", report_args.label_b, "name of campaign b");
  cmp_cmd->add_option("-o,--output", report_args.output, "CSV output file");

  double selftest_interval = 0.01;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the bundled accuracy suite and check it");
  selftest_cmd->add_option("--interval", selftest_interval, "poll interval, s")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*logger_cmd) return cmd_logger(g, logger_args);
    if (*control_cmd) return cmd_control(g, control_args);
    if (*emulate_cmd) return cmd_emulate(g, emulate_args);
    if (*campaign_cmd) return cmd_campaign(g, campaign_args);
    if (*calibrate_cmd) return cmd_calibrate(g, calibrate_args);
    if (*acc_cmd) return cmd_report_accuracy(g, report_args);
    if (*ts_cmd) return cmd_report_timeseries(g, report_args);
    if (*cmp_cmd) return cmd_report_compare(g, report_args);
    if (*selftest_cmd) return cmd_selftest(g, selftest_interval);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
