#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "powerbench/metrology.hpp"
#include "support.hpp"

using namespace powerbench;
using testsupport::power_series;

TEST(RealPower, ProductOfVoltageCurrentAndPowerFactor) {
  EXPECT_DOUBLE_EQ(real_power(230.0, 5.0, 1.0), 1150.0);
  EXPECT_DOUBLE_EQ(real_power(230.0, 0.0, 0.9), 0.0);
  EXPECT_DOUBLE_EQ(real_power(230.0, 5.0, 0.5), 575.0);
}

TEST(RealPower, HalfPowerFactorMatchesCalibratorRowD) {
  // 54630.53 J delivered over 95.01 s
  EXPECT_NEAR(real_power(230.0, 5.0, 0.5), 54630.53 / 95.01, 0.02);
}

TEST(RealPower, RejectsOutOfDomainInputs) {
  EXPECT_THROW(real_power(230.0, 5.0, 1.01), DomainError);
  EXPECT_THROW(real_power(230.0, 5.0, -1.5), DomainError);
  EXPECT_THROW(real_power(-1.0, 5.0, 1.0), DomainError);
  EXPECT_THROW(real_power(230.0, -0.1, 1.0), DomainError);
  EXPECT_THROW(real_power(230.0, 1.0, std::nan("")), DomainError);
}

TEST(RealPower, HomogeneousInVoltage) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = 400 * u(rng), c = 50 * u(rng), pf = 2 * u(rng) - 1, k = 10 * u(rng);
    EXPECT_NEAR(real_power(k * v, c, pf), k * real_power(v, c, pf), 1e-9 * std::abs(k * v * c) + 1e-12);
  }
}

TEST(IntegrateEnergy, ConstantPowerOverFiveMinutes) {
  std::vector<double> w(301, 1150.0);
  EXPECT_DOUBLE_EQ(integrate_energy(power_series(w)), 345000.0);
}

TEST(IntegrateEnergy, SingleSampleIsZero) { EXPECT_EQ(integrate_energy(power_series({500.0})), 0.0); }

TEST(IntegrateEnergy, LeftRectangleUsesEarlierPower) {
  auto s = power_series({100.0, 300.0}, 2.0);
  EXPECT_DOUBLE_EQ(integrate_energy(s), 200.0);
}

TEST(IntegrateEnergy, RejectsBadInput) {
  EXPECT_THROW(integrate_energy({}), std::invalid_argument);
  auto s = power_series({1, 2, 3});
  s[2].timestamp = s[1].timestamp;
  EXPECT_THROW(integrate_energy(s), std::invalid_argument);
  s[2].timestamp = 0.5;
  EXPECT_THROW(integrate_energy(s), std::invalid_argument);
}

TEST(IntegrateEnergy, ConstantSeriesMatchesClosedFormProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = 5000 * u(rng);
    std::vector<ElectricalSample> s;
    double t = 100 * u(rng);
    const double t0 = t;
    const int n = 2 + static_cast<int>(200 * u(rng));
    for (int i = 0; i < n; ++i) {
      ElectricalSample x;
      x.timestamp = t;
      x.active_power = p;
      s.push_back(x);
      t += 0.001 + 3 * u(rng);
    }
    const double expected = p * (s.back().timestamp - t0);
    EXPECT_LE(std::abs(integrate_energy(s) - expected), 1e-12 * std::abs(expected) + 1e-12);
  }
}

TEST(IntegrateEnergy, AdditiveOverSplitsProperty) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(3 + rng() % 100);
    for (auto& x : w) x = 3000 * u(rng);
    const auto s = power_series(w, 0.1 + u(rng));
    const std::size_t k = 1 + rng() % (s.size() - 2);
    const std::span<const ElectricalSample> all(s);
    const double whole = integrate_energy(all);
    const double parts = integrate_energy(all.subspan(0, k + 1)) + integrate_energy(all.subspan(k));
    EXPECT_NEAR(parts, whole, 1e-9 * whole);
  }
}

TEST(Summarize, MeanAndPopulationVariance) {
  const auto s = summarize(power_series({100.0, 300.0}));
  EXPECT_DOUBLE_EQ(s.mean_power, 200.0);
  EXPECT_DOUBLE_EQ(s.power_variance, 10000.0);
  EXPECT_DOUBLE_EQ(s.duration, 1.0);
  EXPECT_DOUBLE_EQ(s.total_energy, 100.0);
  EXPECT_EQ(s.sample_count, 2u);
}

TEST(Summarize, ConstantSeriesHasZeroVariance) {
  const auto s = summarize(power_series(std::vector<double>(50, 1234.5)));
  EXPECT_EQ(s.power_variance, 0.0);
  EXPECT_DOUBLE_EQ(s.mean_power, 1234.5);
  EXPECT_NEAR(s.total_energy, s.mean_power * s.duration, 1e-9);
}

TEST(Summarize, RejectsDegenerateSessions) {
  EXPECT_THROW(summarize(std::span<const ElectricalSample>{}), std::invalid_argument);
  EXPECT_THROW(summarize(power_series({1.0})), std::invalid_argument);
  SessionRecord r;
  r.session_id = "x";
  EXPECT_THROW(summarize(r), std::invalid_argument);
}

TEST(Summarize, VarianceIsNonNegativeProperty) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(1000.0, 0.01);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(2 + rng() % 500);
    for (auto& x : w) x = n(rng);
    EXPECT_GE(summarize(power_series(w)).power_variance, 0.0);
  }
}

TEST(RelativeError, CalibrationSheetRows) {
  EXPECT_NEAR(relative_error(343813.32, 345032.93), -0.0035, 0.00005);
  EXPECT_NEAR(relative_error(53985.94, 54629.41), -0.0118, 0.00005);
  EXPECT_EQ(relative_error(42.0, 42.0), 0.0);
  EXPECT_THROW(relative_error(1.0, 0.0), DomainError);
}

TEST(Productivity, RequestsPerJoule) {
  EXPECT_DOUBLE_EQ(productivity(1000, 500.0), 2.0);
  EXPECT_DOUBLE_EQ(productivity(0, 12.0), 0.0);
  EXPECT_DOUBLE_EQ(productivity(4500, 30000.0), 0.15);
  EXPECT_DOUBLE_EQ(productivity(4500, 30000.0), (4500.0 / 10.0) / (30000.0 / 10.0));
  EXPECT_THROW(productivity(10, 0.0), DomainError);
  EXPECT_THROW(productivity(10, -1.0), DomainError);
}

TEST(Productivity, RateOverPowerEquivalenceProperty) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const long long n = static_cast<long long>(1e6 * u(rng));
    const double e = 1 + 1e6 * u(rng);
    const double d = 1 + 600 * u(rng);
    EXPECT_NEAR(productivity(n, e), (n / d) / (e / d), 1e-12 * productivity(n, e) + 1e-15);
  }
}

TEST(Validate, SampleBounds) {
  ElectricalSample s;
  s.voltage = 230;
  s.current = 1;
  s.power_factor = 0.5;
  s.apparent_power = 230;
  s.active_power = 115;
  s.reactive_power = 199;
  EXPECT_NO_THROW(validate(s));
  auto bad = s;
  bad.power_factor = 1.2;
  EXPECT_THROW(validate(bad), DomainError);
  bad = s;
  bad.active_power = 231;
  EXPECT_THROW(validate(bad), DomainError);
  bad = s;
  bad.current = -1;
  EXPECT_THROW(validate(bad), DomainError);
  EXPECT_EQ(kJoulesPerWattHour, 3600.0);
}
