#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "powerbench/metrology.hpp"
#include "powerbench/orchestrator/plan.hpp"

namespace testsupport {

/// Bitwise CRC-16/MODBUS, written straight from the polynomial.
std::uint16_t crc16_bitwise(std::span<const std::uint8_t> data);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "pb");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Samples at t = 0, dt, 2dt, ... with the given active powers.
std::vector<powerbench::ElectricalSample> power_series(const std::vector<double>& watts, double dt = 1.0);

/// A random but physically consistent sample.
powerbench::ElectricalSample random_sample(std::mt19937_64& rng, double timestamp = 0.0);

std::string read_file(const std::filesystem::path& path);

/// Two campaigns over {10, 25, 50, 75, 100}% with identical power draw where
/// the first completes half the requests of the second at every loaded point.
struct CampaignPair {
  std::vector<powerbench::orchestrator::LoadPointResult> half;
  std::vector<powerbench::orchestrator::LoadPointResult> full;
};
CampaignPair half_requests_fixture();

/// A loopback TCP port that was free a moment ago; nothing listens on it.
std::uint16_t unused_port();

}  // namespace testsupport
