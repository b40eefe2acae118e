#include <chrono>
#include <random>
#include <regex>
#include <thread>

#include <gtest/gtest.h>

#include "powerbench/emulator/meter.hpp"
#include "powerbench/emulator/server.hpp"
#include "powerbench/logger/daemon.hpp"
#include "powerbench/logger/power_logger.hpp"
#include "support.hpp"

using namespace powerbench;
using namespace powerbench::logger;

namespace {

std::vector<std::filesystem::path> csv_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".csv") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

ElectricalSample at(double t, double watts = 100.0) {
  ElectricalSample s;
  s.timestamp = t;
  s.active_power = watts;
  return s;
}

template <typename Pred>
bool eventually(Pred p, double seconds = 5.0) {
  const auto until = std::chrono::steady_clock::now() + std::chrono::duration<double>(seconds);
  while (std::chrono::steady_clock::now() < until) {
    if (p()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return p();
}

}  // namespace

TEST(SessionFileName, Pattern) {
  using namespace std::chrono;
  const sys_seconds t = sys_days{year{2026} / 3 / 4} + hours{5} + minutes{6} + seconds{7};
  EXPECT_EQ(session_file_name("apache-70pct", t, "0badf00d"), "apache-70pct-20260304T050607Z-0badf00d.csv");
  EXPECT_EQ(session_file_name("", t, "0badf00d"), "session-20260304T050607Z-0badf00d.csv");
}

TEST(PowerLogger, StartCreatesCsvWithHeaderImmediately) {
  testsupport::TempDir dir;
  SimulatedClock clock;
  PowerLogger logger(clock, {dir.path(), 1.0, {}});
  const auto id = logger.start_logging("apache-70pct");
  EXPECT_EQ(id.size(), 8u);
  const auto files = csv_files(dir.path());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_TRUE(std::regex_match(files[0].filename().string(),
                               std::regex(R"(apache-70pct-\d{8}T\d{6}Z-[0-9a-f]{8}\.csv)")));
  EXPECT_NE(files[0].filename().string().find(id), std::string::npos);
  EXPECT_TRUE(logger::parse_csv_file(files[0]).empty());
  const auto done = logger.stop_logging();
  EXPECT_EQ(done.record.metadata.at("label"), "apache-70pct");
}

TEST(PowerLogger, StateErrors) {
  SimulatedClock clock;
  PowerLogger logger(clock, {});
  EXPECT_THROW(logger.stop_logging(), LoggerError);
  logger.start_logging();
  try {
    logger.start_logging();
    FAIL();
  } catch (const LoggerError& e) {
    EXPECT_EQ(e.code(), LoggerError::Code::kAlreadyLogging);
  }
  logger.stop_logging();
  try {
    logger.stop_logging();
    FAIL();
  } catch (const LoggerError& e) {
    EXPECT_EQ(e.code(), LoggerError::Code::kNotLogging);
  }
  EXPECT_THROW(logger.start_logging("bad label"), std::invalid_argument);
}

TEST(PowerLogger, TooFewSamples) {
  SimulatedClock clock;
  PowerLogger logger(clock, {});
  logger.start_logging();
  logger.on_sample(at(0.0));
  const auto done = logger.stop_logging();
  EXPECT_FALSE(done.summary);
  EXPECT_EQ(done.status, "too few samples");
  EXPECT_EQ(done.record.samples.size(), 1u);
}

TEST(PowerLogger, SamplesRebasedToSessionStart) {
  SimulatedClock clock(50.0);
  PowerLogger logger(clock, {});
  logger.on_sample(at(49.0));  // idle, dropped
  logger.start_logging();
  logger.on_sample(at(49.5));  // before the start command
  logger.on_sample(at(50.0));
  logger.on_sample(at(51.0, 300.0));
  logger.on_sample(at(51.0));  // duplicate stamp
  clock.advance(2.0);
  const auto done = logger.stop_logging();
  logger.on_sample(at(53.0));  // after stop, dropped
  ASSERT_EQ(done.record.samples.size(), 2u);
  EXPECT_DOUBLE_EQ(done.record.samples[0].timestamp, 0.0);
  EXPECT_DOUBLE_EQ(done.record.samples[1].timestamp, 1.0);
  EXPECT_DOUBLE_EQ(done.summary->mean_power, 200.0);
  EXPECT_DOUBLE_EQ(done.end_time - done.start_time, 2.0);
}

TEST(PowerLogger, ConstantPowerSessionSummary) {
  SimulatedClock clock;
  emulator::MeterEmulator meter(emulator::LoadProfile::constant(230, 5, 1), {}, modbus::RegisterMap::project_default(),
                                1, &clock);
  emulator::EmulatorLink link(meter);
  PowerLogger logger(clock, {});
  logger.start_logging("const");
  modbus::PollOptions opts;
  opts.interval = 1.0;
  opts.until = 10.0;
  modbus::poll(link, modbus::RegisterMap::project_default(), clock, logger, opts);
  const auto done = logger.stop_logging();
  ASSERT_TRUE(done.summary);
  EXPECT_DOUBLE_EQ(done.summary->mean_power, 1150.0);
  EXPECT_LE(std::abs(done.summary->total_energy - 11500.0), 1150.0);
}

TEST(PowerLogger, DuplicateStartAndStrayStopAreIgnored) {
  testsupport::TempDir dir;
  SimulatedClock clock;
  PowerLogger logger(clock, {dir.path(), 1.0, {}});
  EXPECT_FALSE(logger.apply_line("stop\n"));
  EXPECT_TRUE(logger.apply_line("start first\n"));
  logger.on_sample(at(0.0));
  EXPECT_FALSE(logger.apply_line("start second\n"));
  EXPECT_FALSE(logger.apply_line("reboot\n"));
  EXPECT_EQ(logger.mode(), Mode::kLogging);
  EXPECT_EQ(logger.active_sample_count(), 1u);
  EXPECT_TRUE(logger.apply_line("stop"));
  EXPECT_EQ(logger.mode(), Mode::kIdle);
  const auto files = csv_files(dir.path());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].filename().string().rfind("first-", 0), 0u);
}

TEST(PowerLogger, StateMachineProperty) {
  std::mt19937_64 rng(61);
  const std::vector<std::string> lines{"start", "stop", "start x", "garbage", "", "STOP", "start\r\n", "stop\n"};
  for (int trial = 0; trial < 100; ++trial) {
    testsupport::TempDir dir;
    SimulatedClock clock;
    PowerLogger logger(clock, {dir.path(), 1.0, {}});
    bool open = false;
    int sessions = 0;
    for (int i = 0; i < 40; ++i) {
      const auto& l = lines[rng() % lines.size()];
      const auto cmd = parse_command(l);
      logger.apply_line(l);
      if (cmd && cmd->verb == Verb::kStart && !open) {
        open = true;
        ++sessions;
      } else if (cmd && cmd->verb == Verb::kStop && open) {
        open = false;
      }
      ASSERT_EQ(logger.mode() == Mode::kLogging, open);
      clock.advance(1.1);
    }
    EXPECT_EQ(static_cast<int>(csv_files(dir.path()).size()), sessions);
    EXPECT_EQ(static_cast<int>(logger.finished_sessions().size()), sessions - (open ? 1 : 0));
  }
}

TEST(PowerLogger, GapsAreCounted) {
  SimulatedClock clock;
  PowerLogger logger(clock, {});
  logger.on_gap();
  logger.on_gap();
  EXPECT_EQ(logger.gap_count(), 2);
}

TEST(LoggerDaemon, RemoteStartStopProducesOneCsv) {
  testsupport::TempDir dir;
  SteadyClock clock;
  emulator::MeterEmulator meter(emulator::LoadProfile::constant(230, 1, 1), {}, modbus::RegisterMap::project_default(),
                                1, &clock);
  DaemonOptions opts;
  opts.control = {"127.0.0.1", 0};
  opts.poll.interval = 0.05;
  opts.logger.output_dir = dir.path();
  LoggerDaemon daemon(std::make_unique<emulator::EmulatorLink>(meter), modbus::RegisterMap::project_default(), clock,
                      opts);
  daemon.start();
  const net::Endpoint ep{"127.0.0.1", daemon.control_port()};
  send_control(ep, {Verb::kStart, std::string("remote")});
  ASSERT_TRUE(eventually([&] { return daemon.logger().active_sample_count() >= 5; }));
  send_control(ep, {Verb::kStop, std::nullopt});
  ASSERT_TRUE(eventually([&] { return daemon.logger().mode() == Mode::kIdle; }));
  daemon.shutdown();
  const auto files = csv_files(dir.path());
  ASSERT_EQ(files.size(), 1u);
  const auto samples = parse_csv_file(files[0]);
  EXPECT_GE(samples.size(), 5u);
  EXPECT_DOUBLE_EQ(samples[0].active_power, 230.0);
  EXPECT_FALSE(daemon.failed());
}

TEST(LoggerDaemon, ShutdownFinalizesOpenSession) {
  testsupport::TempDir dir;
  SteadyClock clock;
  emulator::MeterEmulator meter(emulator::LoadProfile::constant(230, 1, 1), {}, modbus::RegisterMap::project_default(),
                                1, &clock);
  DaemonOptions opts;
  opts.control = {"127.0.0.1", 0};
  opts.poll.interval = 0.05;
  opts.logger.output_dir = dir.path();
  LoggerDaemon daemon(std::make_unique<emulator::EmulatorLink>(meter), modbus::RegisterMap::project_default(), clock,
                      opts);
  daemon.start();
  daemon.logger().start_logging("open");
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  daemon.shutdown();
  EXPECT_EQ(daemon.logger().mode(), Mode::kIdle);
  ASSERT_EQ(daemon.logger().finished_sessions().size(), 1u);
}

TEST(LoggerDaemon, MeterLossIsSurfaced) {
  SteadyClock clock;
  emulator::MeterEmulator meter(emulator::LoadProfile::constant(230, 1, 1), {}, modbus::RegisterMap::project_default(),
                                1, &clock);
  auto link = std::make_unique<emulator::EmulatorLink>(meter);
  link->set_offline(true);
  DaemonOptions opts;
  opts.control = {"127.0.0.1", 0};
  opts.poll.interval = 0.02;
  LoggerDaemon daemon(std::move(link), modbus::RegisterMap::project_default(), clock, opts);
  daemon.start();
  ASSERT_TRUE(eventually([&] { return daemon.failed(); }));
  EXPECT_NE(daemon.failure().find("consecutive"), std::string::npos);
  EXPECT_EQ(daemon.logger().gap_count(), 5);
}
