#include "support.hpp"

#include "powerbench/net.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace testsupport {

std::uint16_t crc16_bitwise(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : data) {
    crc ^= byte;
    for (int bit = 0; bit < 8; ++bit) {
      if (crc & 1u) {
        crc = static_cast<std::uint16_t>((crc >> 1) ^ 0xA001);
      } else {
        crc = static_cast<std::uint16_t>(crc >> 1);
      }
    }
  }
  return crc;
}

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<powerbench::ElectricalSample> power_series(const std::vector<double>& watts, double dt) {
  std::vector<powerbench::ElectricalSample> out;
  for (std::size_t i = 0; i < watts.size(); ++i) {
    powerbench::ElectricalSample s;
    s.timestamp = static_cast<double>(i) * dt;
    s.voltage = 230.0;
    s.active_power = watts[i];
    s.apparent_power = std::abs(watts[i]);
    s.power_factor = 1.0;
    s.current = std::abs(watts[i]) / 230.0;
    s.frequency = 50.0;
    out.push_back(s);
  }
  return out;
}

powerbench::ElectricalSample random_sample(std::mt19937_64& rng, double timestamp) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  powerbench::ElectricalSample s;
  s.timestamp = timestamp;
  s.voltage = 200.0 + 60.0 * u(rng);
  s.current = 30.0 * u(rng);
  s.frequency = 49.0 + 2.0 * u(rng);
  s.power_factor = 2.0 * u(rng) - 1.0;
  s.apparent_power = s.voltage * s.current;
  s.active_power = s.apparent_power * s.power_factor;
  s.reactive_power = s.apparent_power * std::sqrt(1.0 - s.power_factor * s.power_factor);
  s.active_energy_total = 1e7 * u(rng);
  s.reactive_energy_total = 1e7 * u(rng);
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CampaignPair half_requests_fixture() {
  using powerbench::orchestrator::LoadPointResult;
  CampaignPair pair;
  for (double pct : {10.0, 25.0, 50.0, 75.0, 100.0}) {
    const double power = 60.0 + 0.9 * pct;
    const auto samples = power_series(std::vector<double>(61, power));
    for (int side = 0; side < 2; ++side) {
      LoadPointResult p;
      p.percent = pct;
      p.label = (side == 0 ? "half-p" : "full-p") + std::to_string(static_cast<int>(pct));
      p.request_count = static_cast<long long>(pct * 120) * (side == 0 ? 1 : 2);
      p.achieved_rate = static_cast<double>(p.request_count) / 60.0;
      p.target_rate = p.achieved_rate;
      p.summary = powerbench::summarize(samples);
      p.productivity = static_cast<double>(p.request_count) / p.summary->total_energy;
      (side == 0 ? pair.half : pair.full).push_back(p);
    }
  }
  return pair;
}

std::uint16_t unused_port() {
  powerbench::net::TcpListener l({"127.0.0.1", 0});
  return l.port();
}

}  // namespace testsupport
