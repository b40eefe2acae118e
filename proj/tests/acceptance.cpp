// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cstring>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <unistd.h>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "powerbench/analysis/accuracy.hpp"
#include "powerbench/analysis/compare.hpp"
#include "powerbench/emulator/scenario.hpp"
#include "powerbench/emulator/server.hpp"
#include "powerbench/logger/csv.hpp"
#include "powerbench/logger/daemon.hpp"
#include "powerbench/modbus/frame.hpp"
#include "powerbench/modbus/master.hpp"
#include "powerbench/orchestrator/accuracy_suite.hpp"
#include "powerbench/orchestrator/calibrate.hpp"
#include "powerbench/orchestrator/campaign.hpp"
#include "support.hpp"

using namespace powerbench;
using orchestrator::LoadPointResult;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += why;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::filesystem::path> csv_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".csv") out.push_back(e.path());
  return out;
}

// 1 -------------------------------------------------------------------------
Outcome table1_reproduction() {
  struct Published {
    const char* name;
    double error;
    double mean_power;
  };
  const Published rows[] = {{"table1-row-a", -0.0035, 1146},  {"table1-row-b", -0.0025, 114.7},
                            {"table1-row-c", -0.010, 4552},   {"table1-row-d", 0.0030, 576.7},
                            {"table1-row-e", -0.012, 568.2},  {"table1-row-f", -0.024, 2245}};
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<analysis::AccuracyInput> inputs;
  for (const auto& r : rows) {
    const auto sc = emulator::Scenario::load_file(emulator::resolve_scenario(r.name));
    analysis::AccuracyInput in;
    in.label = r.name;
    in.setting = *sc.calibrator;
    in.session = orchestrator::run_accuracy_scenario(sc).record;
    inputs.push_back(std::move(in));
  }
  const auto report = analysis::accuracy_report(inputs);
  const double took = seconds_since(t0);
  std::string errs;
  for (std::size_t i = 0; i < report.size(); ++i) {
    const auto& row = report[i];
    errs += fmt::format("{}{:+.2f}%", i ? " " : "", 100 * row.relative_energy_error);
    o.require(std::abs(row.relative_energy_error - rows[i].error) <= 0.0002,
              fmt::format("{} error {:.4f}", rows[i].name, row.relative_energy_error));
    o.require(std::abs(row.mean_power - rows[i].mean_power) <= 0.005 * rows[i].mean_power,
              fmt::format("{} mean power {:.1f}", rows[i].name, row.mean_power));
  }
  o.require(took <= 60.0, fmt::format("took {:.1f} s", took));
  if (o.pass) o.detail = fmt::format("errors {} in {:.2f} s", errs, took);
  return o;
}

// 2 -------------------------------------------------------------------------
double pipeline_energy(double interval) {
  SimulatedClock clock;
  emulator::MeterEmulator meter(emulator::LoadProfile::constant(230, 5, 1, 300), {},
                                modbus::RegisterMap::project_default(), 1, &clock);
  emulator::EmulatorLink link(meter);
  logger::PowerLogger lg(clock, {});
  lg.start_logging("oracle");
  modbus::PollOptions opts;
  opts.interval = interval;
  opts.until = 300.0;
  modbus::poll(link, modbus::RegisterMap::project_default(), clock, lg, opts);
  return lg.stop_logging().summary->total_energy;
}

Outcome energy_oracle() {
  Outcome o;
  const double closed_form = 230.0 * 5.0 * 300.0;
  const double e1 = pipeline_energy(1.0);
  const double e01 = pipeline_energy(0.1);
  o.require(std::abs(e1 - closed_form) <= 1150.0, fmt::format("1 Hz energy {}", e1));
  o.require(std::abs(e01 - closed_form) <= 115.0, fmt::format("10 Hz energy {}", e01));
  if (o.pass) o.detail = fmt::format("1 s: {:.1f} J, 0.1 s: {:.1f} J vs {:.0f} J", e1, e01, closed_form);
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome starting_current() {
  Outcome o;
  const auto sc = emulator::Scenario::load_file(emulator::resolve_scenario("starting-current"));
  SimulatedClock clock;
  emulator::MeterEmulator meter(sc.profile, sc.error, modbus::RegisterMap::project_default(), 1, &clock);
  emulator::EmulatorLink link(meter);
  const double currents[] = {0.05, 0.09, 0.094, 0.095, 0.10};
  std::string seen;
  for (int i = 0; i < 5; ++i) {
    clock.sleep_until(10.0 * i + 5.0);
    const auto s = modbus::read_sample(link, modbus::RegisterMap::project_default(), 1, clock);
    seen += fmt::format("{}{}A:{}W", i ? " " : "", currents[i], s.active_power);
    if (i < 3) o.require(s.active_power == 0.0, fmt::format("{} A reads {} W", currents[i], s.active_power));
    else o.require(s.active_power > 0.0, fmt::format("{} A reads {} W", currents[i], s.active_power));
  }
  if (o.pass) o.detail = seen;
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome modbus_robustness() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int trips = 0;
  for (; trips < 2000; ++trips) {
    const auto unit = static_cast<std::uint8_t>(1 + rng() % 247);
    const auto count = static_cast<std::uint16_t>(1 + rng() % 125);
    const auto start = static_cast<std::uint16_t>(rng() % (0x10000 - count + 1));
    const auto req = modbus::decode_request(modbus::encode_read_request(unit, start, count));
    if (req.unit_id != unit || req.start_address != start || req.count != count) {
      o.require(false, fmt::format("request round trip {} {} {}", unit, start, count));
      break;
    }
    std::vector<std::uint16_t> regs(1 + rng() % 125);
    for (auto& r : regs) r = static_cast<std::uint16_t>(rng());
    const auto resp = modbus::decode_response(modbus::encode_read_response(unit, regs), unit);
    if (resp.registers != regs) {
      o.require(false, "response round trip");
      break;
    }
  }

  const auto frame = modbus::encode_read_request(1, 0x0000, 14);
  int rejected = 0;
  for (std::size_t pos = 0; pos < frame.size(); ++pos) {
    for (int delta = 1; delta < 256; ++delta) {
      auto bad = frame;
      bad[pos] = static_cast<std::uint8_t>(bad[pos] ^ delta);
      try {
        modbus::decode_request(bad);
        o.require(false, fmt::format("corruption at byte {} xor {:#04x} decoded", pos, delta));
      } catch (const modbus::ModbusError& e) {
        if (e.code() == modbus::Errc::kCrcMismatch || e.code() == modbus::Errc::kShortFrame) ++rejected;
        else o.require(false, fmt::format("corruption classified as {}", modbus::to_string(e.code())));
      }
    }
  }
  o.require(rejected == 255 * 8, fmt::format("{} of 2040 corruptions rejected", rejected));
  if (o.pass) o.detail = fmt::format("{} round trips, {} corruptions rejected", trips, rejected);
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome control_state_machine() {
  Outcome o;
  testsupport::TempDir dir;
  SteadyClock clock;
  emulator::MeterEmulator meter(emulator::LoadProfile::constant(230, 1, 1), {}, modbus::RegisterMap::project_default(),
                                1, &clock);
  logger::DaemonOptions opts;
  opts.control = {"127.0.0.1", 0};
  opts.poll.interval = 0.05;
  opts.logger.output_dir = dir.path();
  logger::LoggerDaemon daemon(std::make_unique<emulator::EmulatorLink>(meter), modbus::RegisterMap::project_default(),
                              clock, opts);
  daemon.start();
  std::size_t bytes_back = 0;
  for (const char* line : {"start\n", "start\n", "stop\n", "stop\n", "garbage\n", "start\n", "stop\n"}) {
    auto fd = net::connect_tcp({"127.0.0.1", daemon.control_port()});
    net::write_all(fd.get(), line, std::strlen(line));
    // Keep our end open until the server hangs up; count anything it sends.
    if (net::wait_readable(fd.get(), 3.0)) {
      char buf[64];
      ssize_t n;
      while ((n = ::read(fd.get(), buf, sizeof(buf))) > 0) bytes_back += static_cast<std::size_t>(n);
    } else {
      o.require(false, "server did not close the connection");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(150));
  }
  daemon.shutdown();
  const auto files = csv_files(dir.path());
  o.require(files.size() == 2, fmt::format("{} session files", files.size()));
  o.require(bytes_back == 0, fmt::format("{} bytes sent to clients", bytes_back));
  o.require(!daemon.failed(), "daemon failed");
  o.require(daemon.logger().finished_sessions().size() == 2, "finished session count");
  if (o.pass) o.detail = "2 sessions, 0 bytes to clients";
  return o;
}

// 6 and 7 -------------------------------------------------------------------

/// Emulated desktop whose draw follows the ladder, plus a logger daemon
/// polling it in real time.
emulator::Scenario desktop() {
  return emulator::Scenario::load_file(emulator::resolve_scenario("desktop-ladder"));
}

struct Bench {
  SteadyClock clock;
  emulator::Scenario scenario = desktop();
  emulator::MeterEmulator meter{scenario.profile, scenario.error, modbus::RegisterMap::project_default(), 1, &clock};
  std::unique_ptr<logger::LoggerDaemon> daemon;
  orchestrator::CampaignHooks hooks;

  Bench(const std::filesystem::path& session_dir, double interval) {
    logger::DaemonOptions opts;
    opts.control = {"127.0.0.1", 0};
    opts.poll.interval = interval;
    opts.logger.output_dir = session_dir;
    opts.logger.sample_interval = interval;
    daemon = std::make_unique<logger::LoggerDaemon>(std::make_unique<emulator::EmulatorLink>(meter),
                                                    modbus::RegisterMap::project_default(), clock, opts);
    daemon->start();
    hooks.on_point_start = [this](double pct) { meter.set_load_percent(pct); };
    hooks.on_point_end = [this](double) { meter.set_load_percent(std::nullopt); };
  }
  ~Bench() { daemon->shutdown(); }
};

Outcome end_to_end_ladder() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  testsupport::TempDir dir;
  orchestrator::StubServerOptions so;
  so.rate_cap = 200;
  orchestrator::StubHttpServer stub(so);
  stub.start();

  orchestrator::TestPlan plan;
  plan.label = "ladder";
  plan.ladder = {0, 50, 100};
  plan.point_duration = 5;
  plan.warmup = 1;
  plan.poll_interval = 0.1;
  plan.workload.target = stub.url();
  plan.calibration.probe_duration = 1.0;

  Bench bench(dir.path(), plan.poll_interval);
  orchestrator::HttpWorkload workload(plan.workload);
  orchestrator::WorkloadGenerator gen(workload);
  const auto cal = orchestrator::calibrate_max_load(gen, plan.calibration, &bench.daemon->logger());
  plan.max_rate = cal.max_rate;
  const auto points = orchestrator::run_remote_launch(plan, workload, bench.daemon->logger(), bench.hooks);
  const double took = seconds_since(t0);

  o.require(points.size() == 3, fmt::format("{} points", points.size()));
  for (const auto& p : points) o.require(p.status == orchestrator::PointStatus::kOk && p.summary.has_value(), p.label + " " + to_string(p.status));
  if (!o.pass) return o;
  o.require(points[0].request_count == 0, "idle point served requests");
  o.require(points[0].summary->total_energy > 0.0, "idle energy not positive");
  for (std::size_t i = 1; i < points.size(); ++i)
    o.require(points[i].summary->mean_power >= points[i - 1].summary->mean_power, "mean power decreases");
  for (const auto& p : points) {
    const double expect = static_cast<double>(p.request_count) / p.summary->total_energy;
    const double rel = expect == 0.0 ? std::abs(p.productivity) : std::abs(p.productivity - expect) / expect;
    o.require(rel <= 1e-9, p.label + " productivity identity");
  }
  o.require(took <= 180.0, fmt::format("took {:.1f} s", took));
  if (o.pass)
    o.detail = fmt::format("max {:.1f} req/s; P = {:.1f} / {:.1f} / {:.1f} W; {:.3f} / {:.3f} req/J; {:.1f} s",
                           cal.max_rate, points[0].summary->mean_power, points[1].summary->mean_power,
                           points[2].summary->mean_power, points[1].productivity, points[2].productivity, took);
  return o;
}

Outcome use_case_equivalence() {
  Outcome o;
  orchestrator::StubHttpServer stub;
  stub.start();
  orchestrator::TestPlan plan;
  plan.label = "equiv";
  plan.ladder = {0, 50, 100};
  plan.point_duration = 3;
  plan.warmup = 0.5;
  plan.poll_interval = 0.1;
  plan.max_rate = 50;
  plan.settle = 0.3;
  plan.workload.target = stub.url();
  orchestrator::HttpWorkload workload(plan.workload);

  testsupport::TempDir dir_a, dir_b;
  std::vector<LoadPointResult> a, b;
  {
    Bench bench(dir_a.path(), plan.poll_interval);
    a = orchestrator::run_remote_launch(plan, workload, bench.daemon->logger(), bench.hooks);
  }
  {
    Bench bench(dir_b.path(), plan.poll_interval);
    b = orchestrator::run_local_with_remote_logging(plan, workload, {"127.0.0.1", bench.daemon->control_port()},
                                                    dir_b.path(), bench.hooks);
  }
  o.require(a.size() == 3 && b.size() == 3, "point count");
  if (!o.pass) return o;
  std::string diffs;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!a[i].summary || !b[i].summary) o.require(false, a[i].label + " lacks a summary");
  }
  if (!o.pass) return o;
  // Full-load draw of the emulated desktop.
  const auto sc = desktop();
  const auto full = sc.profile.at_percent(100);
  const double p_max = sc.profile.steps.front().voltage * full.current * full.power_factor;
  const double bound = 2.0 * plan.poll_interval * p_max;
  for (std::size_t i = 0; i < 3; ++i) {
    const double d = std::abs(a[i].summary->total_energy - b[i].summary->total_energy);
    diffs += fmt::format("{}{:.2f}", i ? " / " : "", d);
    o.require(d <= bound, fmt::format("{}: {:.2f} J apart, bound {:.2f} J", a[i].label, d, bound));
  }
  if (o.pass) o.detail = fmt::format("energy differences {} J, bound {:.2f} J", diffs, bound);
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome calibration_determinism() {
  Outcome o;
  std::string found;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    orchestrator::StubServerOptions so;
    so.rate_cap = 500;
    so.jitter = 0.002;
    so.seed = seed;
    orchestrator::StubHttpServer stub(so);
    stub.start();
    orchestrator::HttpLoadGenerator gen(stub.url());
    orchestrator::CalibrationOptions co;
    co.probe_duration = 1.0;
    const auto r = orchestrator::calibrate_max_load(gen, co);
    found += fmt::format("{}{:.1f} ({} probes)", found.empty() ? "" : ", ", r.max_rate, r.probes.size());
    o.require(r.max_rate >= 475.0 && r.max_rate <= 500.0, fmt::format("seed {}: {:.1f} req/s", seed, r.max_rate));
    o.require(r.probes.size() <= 12, fmt::format("seed {}: {} probes", seed, r.probes.size()));
  }
  if (o.pass) o.detail = found;
  return o;
}

// 9 -------------------------------------------------------------------------
Outcome csv_fidelity() {
  Outcome o;
  o.require(logger::csv_header() ==
                "timestamp_s,voltage_V,current_A,frequency_Hz,power_factor,active_power_W,reactive_power_var,"
                "apparent_power_VA,active_energy_J,reactive_energy_vars",
            "header differs");
  std::mt19937_64 rng(99);
  std::size_t checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SessionRecord rec;
    double t = 0;
    for (int i = 0; i < 50; ++i) {
      rec.samples.push_back(testsupport::random_sample(rng, t));
      t += std::uniform_real_distribution<double>(1e-3, 3.0)(rng);
    }
    std::stringstream ss;
    logger::write_csv(rec, ss);
    const auto back = logger::parse_csv(ss);
    if (back.size() != rec.samples.size()) {
      o.require(false, "sample count changed");
      break;
    }
    for (std::size_t i = 0; i < back.size(); ++i) {
      if (!(rec.samples[i] == back[i])) o.require(false, fmt::format("sample {} of trial {} changed", i, trial));
      ++checked;
    }
    if (!o.pass) break;
  }
  if (o.pass) o.detail = fmt::format("{} samples bit-exact, header exact", checked);
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome compare_half_requests() {
  Outcome o;
  const auto f = testsupport::half_requests_fixture();
  const auto r = analysis::compare_campaigns(f.half, f.full, "half", "full");
  o.require(r.points.size() == f.half.size(), "shared point count");
  std::string ratios;
  for (const auto& p : r.points) {
    if (!p.productivity_ratio) {
      o.require(false, fmt::format("{}%: no ratio", p.percent));
      continue;
    }
    ratios += fmt::format("{}{:.9f}", ratios.empty() ? "" : " ", *p.productivity_ratio);
    o.require(std::abs(*p.productivity_ratio - 0.5) <= 1e-9, fmt::format("{}%: {}", p.percent, *p.productivity_ratio));
  }
  if (o.pass) o.detail = "ratios " + ratios;
  return o;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"accuracy suite reproduction", table1_reproduction},
      {"energy oracle", energy_oracle},
      {"starting-current gate", starting_current},
      {"Modbus robustness", modbus_robustness},
      {"control protocol state machine", control_state_machine},
      {"end-to-end ladder", end_to_end_ladder},
      {"use-case equivalence", use_case_equivalence},
      {"calibration determinism", calibration_determinism},
      {"CSV fidelity", csv_fidelity},
      {"campaign comparison", compare_half_requests},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
