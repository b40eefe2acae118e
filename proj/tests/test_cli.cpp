#include <fstream>
#include <map>

#include <gtest/gtest.h>

#include "powerbench/cli_config.hpp"
#include "powerbench/logger/csv.hpp"
#include "powerbench/net.hpp"
#include "powerbench/orchestrator/manifest.hpp"
#include "powerbench/orchestrator/runner.hpp"
#include "support.hpp"

using namespace powerbench;
using orchestrator::run_command;
using orchestrator::shell_quote;

namespace {

CliConfig::EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars](const char* key) -> std::optional<std::string> {
    auto it = vars.find(key);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

std::string cli() { return shell_quote(POWERBENCH_CLI_PATH); }

orchestrator::CommandResult sh(const std::string& script, double timeout = 120) {
  orchestrator::RemoteRunner r;
  r.timeout = timeout;
  return run_command(r, script);
}

std::vector<std::filesystem::path> csvs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::exists(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".csv") out.push_back(e.path());
  return out;
}

}  // namespace

TEST(CliConfig, Defaults) {
  CliConfig c;
  EXPECT_EQ(c.endpoint.port, 9595);
  EXPECT_EQ(c.poll_interval, 1.0);
  EXPECT_NO_THROW(c.validate());
}

TEST(CliConfig, LayersFileEnvFlags) {
  testsupport::TempDir dir;
  const auto file = dir.path() / "pb.yaml";
  std::ofstream(file) << "endpoint: 10.0.0.1:7000\noutput_dir: from-file\npoll_interval: 2\nlog_level: debug\n";
  CliOverrides flags;
  EXPECT_EQ(load_cli_config(file, flags, env_of({})).endpoint.host, "10.0.0.1");

  auto c = load_cli_config(file, flags, env_of({{"POWERBENCH_ENDPOINT", "10.0.0.2:7001"},
                                                {"POWERBENCH_OUTPUT_DIR", "from-env"}}));
  EXPECT_EQ(c.endpoint.host, "10.0.0.2");
  EXPECT_EQ(c.output_dir, "from-env");
  EXPECT_EQ(c.poll_interval, 2.0);
  EXPECT_EQ(c.log_level, "debug");

  flags.endpoint = "10.0.0.3:7002";
  flags.poll_interval = 0.5;
  c = load_cli_config(file, flags, env_of({{"POWERBENCH_ENDPOINT", "10.0.0.2:7001"}}));
  EXPECT_EQ(c.endpoint.host, "10.0.0.3");
  EXPECT_EQ(c.endpoint.port, 7002);
  EXPECT_EQ(c.poll_interval, 0.5);
  EXPECT_EQ(c.output_dir, "from-file");
}

TEST(CliConfig, UnknownKeyHasLineContext) {
  testsupport::TempDir dir;
  const auto file = dir.path() / "pb.yaml";
  std::ofstream(file) << "endpoint: 127.0.0.1:1\npoll_intervall: 2\n";
  try {
    load_cli_config(file, {}, env_of({}));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("pb.yaml:2:"), std::string::npos) << e.what();
  }
}

TEST(CliConfig, DescribeIsKeyValueLines) {
  CliConfig c;
  const auto lines = c.describe();
  ASSERT_FALSE(lines.empty());
  bool endpoint = false;
  for (const auto& l : lines) {
    EXPECT_NE(l.find('='), std::string::npos) << l;
    if (l == "endpoint=127.0.0.1:9595") endpoint = true;
  }
  EXPECT_TRUE(endpoint);
}

TEST(CliBinary, UsageErrorExitsTwo) {
  EXPECT_EQ(sh(cli() + " frobnicate").exit_code, 2);
  EXPECT_EQ(sh(cli() + " control sideways").exit_code, 2);
}

TEST(CliBinary, BadRegisterMapExitsTwoWithoutListener) {
  const auto port = testsupport::unused_port();
  const auto r = sh(cli() + " --register-map /nonexistent/map.yaml --endpoint 127.0.0.1:" + std::to_string(port) +
                    " logger");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("/nonexistent/map.yaml"), std::string::npos);
  EXPECT_NO_THROW(net::TcpListener({"127.0.0.1", port}));
}

TEST(CliBinary, ControlToUnreachableExitsOne) {
  const auto r = sh(cli() + " --endpoint 127.0.0.1:" + std::to_string(testsupport::unused_port()) + " control stop");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(CliBinary, LoggerSessionAndInterrupt) {
  testsupport::TempDir dir;
  const auto out = dir.path() / "sessions";
  const std::string ep = "127.0.0.1:" + std::to_string(testsupport::unused_port());
  const std::string common =
      cli() + " --endpoint " + ep + " --meter emulated:table1-row-b --poll-interval 0.05 --output-dir " + shell_quote(out.string());
  const std::string script = common + " logger & pid=$!\n"
                             "for i in $(seq 50); do " + cli() + " --endpoint " + ep + " control stop 2>/dev/null && break; sleep 0.1; done\n"
                             + cli() + " --endpoint " + ep + " control start --label closed || exit 10\n"
                             "sleep 0.5\n"
                             + cli() + " --endpoint " + ep + " control stop || exit 11\n"
                             "sleep 0.2\n"
                             + cli() + " --endpoint " + ep + " control start --label open || exit 12\n"
                             "sleep 0.5\n"
                             "kill -INT $pid\n"
                             "wait $pid\n"
                             "echo logger-exit=$?\n";
  const auto r = sh(script, 60);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("logger-exit=0"), std::string::npos) << r.output;
  const auto files = csvs(out);
  ASSERT_EQ(files.size(), 2u) << r.output;
  for (const auto& f : files) {
    const auto samples = logger::parse_csv_file(f);
    EXPECT_GE(samples.size(), 3u) << f;
    const auto text = testsupport::read_file(f);
    EXPECT_EQ(text.rfind("# ", 0), 0u);
    EXPECT_NE(text.find("endpoint=" + ep), std::string::npos);
  }
}

TEST(CliBinary, SelftestPasses) {
  const auto r = sh(cli() + " selftest");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("0.5 (cap.)"), std::string::npos);
}

TEST(CliBinary, ReportCompareAndTimeseries) {
  testsupport::TempDir dir;
  const auto f = testsupport::half_requests_fixture();
  orchestrator::write_manifest(f.half, dir.path() / "a.csv");
  orchestrator::write_manifest(f.full, dir.path() / "b.csv");
  const auto out = dir.path() / "cmp.csv";
  auto r = sh(cli() + " report compare " + shell_quote((dir.path() / "a.csv").string()) + " " +
              shell_quote((dir.path() / "b.csv").string()) + " --label-a remote --label-b local -o " +
              shell_quote(out.string()));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto text = testsupport::read_file(out);
  EXPECT_EQ(text.rfind("# powerbench", 0), 0u);
  EXPECT_NE(text.find("100.0,"), std::string::npos);
  EXPECT_NE(text.find(",0.5\n"), std::string::npos) << text;

  const auto session = dir.path() / "s.csv";
  SessionRecord rec;
  rec.samples = testsupport::power_series(std::vector<double>(20, 50.0));
  logger::write_csv(rec, session);
  r = sh(cli() + " report timeseries --session " + shell_quote(session.string()) + " --window 5");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("t_s,power_W\n0.0,50.0\n5.0,50.0\n"), std::string::npos) << r.output;
}

TEST(CliBinary, CampaignWithEmbeddedLogger) {
  testsupport::TempDir dir;
  const auto plan = dir.path() / "plan.yaml";
  std::ofstream(plan) << "label: cli\nladder: [0, 100]\npoint_duration: 1\nwarmup: 0.2\nmax_rate: 40\n";
  const auto r = sh(cli() + " --meter emulated:desktop-ladder --poll-interval 0.05 --endpoint 127.0.0.1:" +
                    std::to_string(testsupport::unused_port()) + " campaign --plan " + shell_quote(plan.string()) +
                    " --use-case remote-launch --with-logger --local-stub 100 --output " +
                    shell_quote(dir.path().string()));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto points = orchestrator::read_manifest(dir.path() / "cli-manifest.csv");
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].request_count, 0);
  EXPECT_NEAR(points[1].request_count, 40, 2);
  ASSERT_TRUE(points[1].summary);
  EXPECT_GT(points[1].summary->mean_power, points[0].summary->mean_power);
}
