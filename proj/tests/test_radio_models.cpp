#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "east/radio_models.hpp"

// Expected values below were frozen from tests/oracle/radio_oracle.py.

namespace east {
namespace {

const LinkBudgetParams kDefaults{};

TEST(RssiLoss, ReferenceTemperatureIsZero) {
  EXPECT_DOUBLE_EQ(rssi_loss_from_temperature(TemperatureC{25.0}).value, 0.0);
}

TEST(RssiLoss, RangeEndpoints) {
  EXPECT_NEAR(rssi_loss_from_temperature(TemperatureC{53.0}).value, 5.5888, 1e-12);
  EXPECT_NEAR(rssi_loss_from_temperature(TemperatureC{-10.0}).value, -6.986, 1e-12);
}

TEST(RssiLoss, RejectsNonFinite) {
  EXPECT_THROW(rssi_loss_from_temperature(TemperatureC{std::nan("")}), DomainError);
  EXPECT_THROW(rssi_loss_from_temperature(TemperatureC{INFINITY}), DomainError);
}

TEST(RssiLoss, LinearInTemperature) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> t(-50.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = t(gen), b = t(gen);
    const double diff = rssi_loss_from_temperature(TemperatureC{a}).value -
                        rssi_loss_from_temperature(TemperatureC{b}).value;
    EXPECT_NEAR(diff, 0.1996 * (a - b), 1e-12);
  }
}

TEST(PowerLevel, UnitBase) {
  EXPECT_DOUBLE_EQ(power_level_for_rssi_loss(RssiLossDbm{-28.0}).value, 1.0);
}

TEST(PowerLevel, ReproducesThresholdLevels) {
  EXPECT_NEAR(power_level_for_rssi_loss(RssiLossDbm{3.78}).value, 43.24, 0.05);
  EXPECT_NEAR(power_level_for_rssi_loss(RssiLossDbm{-0.61}).value, 31.77, 0.05);
  EXPECT_NEAR(power_level_for_rssi_loss(RssiLossDbm{-5.17}).value, 22.21, 0.05);
  EXPECT_NEAR(power_level_for_rssi_loss(RssiLossDbm{3.78}).value, 43.22102156145386, 1e-9);
}

TEST(PowerLevel, DomainGuard) {
  EXPECT_THROW(power_level_for_rssi_loss(RssiLossDbm{-40.0}), DomainError);
  EXPECT_THROW(power_level_for_rssi_loss(RssiLossDbm{-55.0}), DomainError);
  EXPECT_NO_THROW(power_level_for_rssi_loss(RssiLossDbm{-39.999}));
}

TEST(PowerLevel, StrictlyIncreasing) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> l(-39.9, 30.0);
  for (int i = 0; i < 2000; ++i) {
    double a = l(gen), b = l(gen);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    EXPECT_LT(power_level_for_rssi_loss(RssiLossDbm{a}), power_level_for_rssi_loss(RssiLossDbm{b}));
  }
}

TEST(PowerLevel, ComposedRangeOverSimulationTemperatures) {
  for (double t = -10.0; t <= 53.0; t += 0.25) {
    const double level = power_level_for_rssi_loss(rssi_loss_from_temperature(TemperatureC{t})).value;
    EXPECT_GE(level, 19.0);
    EXPECT_LE(level, 48.7);
  }
  EXPECT_NEAR(power_level_for_rssi_loss(rssi_loss_from_temperature(TemperatureC{-10})).value,
              19.010528107784424, 1e-9);
  EXPECT_NEAR(power_level_for_rssi_loss(rssi_loss_from_temperature(TemperatureC{53})).value,
              48.625023224342186, 1e-9);
}

TEST(FreeSpace, ZeroPathLossDistance) {
  const double d = kDefaults.wavelength_m() / (4.0 * std::numbers::pi);
  EXPECT_NEAR(free_space_base_requirement(Meters{d}, kDefaults).value, -106.68710989219545, 1e-9);
}

TEST(FreeSpace, HundredMetres) {
  const double v = free_space_base_requirement(Meters{100.0}, kDefaults).value;
  EXPECT_NEAR(v, -26.45, 0.1);
  EXPECT_NEAR(v, -26.45600498302143, 1e-9);
}

TEST(FreeSpace, DoublingAddsSixDb) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> d(0.5, 500.0);
  for (int i = 0; i < 100; ++i) {
    const double x = d(gen);
    const double delta = free_space_base_requirement(Meters{2 * x}, kDefaults).value -
                         free_space_base_requirement(Meters{x}, kDefaults).value;
    EXPECT_NEAR(delta, 20.0 * std::log10(2.0), 1e-9);
  }
}

TEST(FreeSpace, IncreasingInDistance) {
  double prev = -std::numeric_limits<double>::infinity();
  for (double d = 0.1; d < 200.0; d *= 1.3) {
    const double v = free_space_base_requirement(Meters{d}, kDefaults).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(FreeSpace, RejectsNonPositiveDistance) {
  EXPECT_THROW(free_space_base_requirement(Meters{0.0}, kDefaults), DomainError);
  EXPECT_THROW(free_space_base_requirement(Meters{-1.0}, kDefaults), DomainError);
}

TEST(FreeSpace, MarginScalesNoiseTerm) {
  LinkBudgetParams p;
  p.margin_m = 10.0;
  EXPECT_NEAR(free_space_base_requirement(Meters{10}, p).value -
                  free_space_base_requirement(Meters{10}, kDefaults).value,
              10.0, 1e-9);
}

TEST(RequiredTransmitPower, AddsLevel) {
  EXPECT_DOUBLE_EQ(required_transmit_power(Meters{42}, PowerDbm{0}, kDefaults).value,
                   free_space_base_requirement(Meters{42}, kDefaults).value);
  EXPECT_NEAR(required_transmit_power(Meters{100}, PowerDbm{43.24}, kDefaults).value,
              16.783995016978572, 1e-9);
  EXPECT_NEAR(required_transmit_power(Meters{100}, PowerDbm{43.24}, kDefaults).value, 16.79, 0.15);
  EXPECT_NEAR(required_transmit_power(Meters{100}, PowerDbm{22.21}, kDefaults).value, -4.24, 0.15);
  EXPECT_THROW(required_transmit_power(Meters{0}, PowerDbm{10}, kDefaults), DomainError);
}

TEST(PowerConversion, Definitions) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(PowerDbm{0}).value, 0.001);
  EXPECT_DOUBLE_EQ(dbm_to_watts(PowerDbm{30}).value, 1.0);
  EXPECT_THROW(watts_to_dbm(PowerWatts{0}), DomainError);
  EXPECT_THROW(watts_to_dbm(PowerWatts{-1}), DomainError);
}

TEST(PowerConversion, RoundTrip) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> p(-120.0, 60.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = p(gen);
    const double back = watts_to_dbm(dbm_to_watts(PowerDbm{x})).value;
    EXPECT_LE(std::abs(back - x), 1e-9 * std::max(1.0, std::abs(x)));
  }
}

TEST(Prr, LogisticShape) {
  const PrrParams q{};
  EXPECT_DOUBLE_EQ(prr_from_margin(q.beta, q), 0.5);
  EXPECT_NEAR(prr_from_margin(0.0, PrrParams{0.5, -4.0}), 0.8807970779778823, 1e-12);
  EXPECT_NEAR(prr_from_margin(500.0, q), 1.0, 1e-12);
  EXPECT_THROW(prr_from_margin(std::nan(""), q), DomainError);
  double prev = 0.0;
  for (double m = -40.0; m <= 30.0; m += 0.5) {
    const double p = prr_from_margin(m, q);
    EXPECT_GT(p, prev);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
    prev = p;
  }
}

TEST(Energy, FirstOrderModel) {
  const EnergyModelParams e{};
  EXPECT_NEAR(tx_energy(PowerDbm{0}, 1000, e).value, 5.4e-5, 1e-15);
  EXPECT_NEAR(rx_energy(1000, e).value, 5.0e-5, 1e-15);
  EXPECT_LT(tx_energy(PowerDbm{0}, 256, e), tx_energy(PowerDbm{1}, 256, e));
  EXPECT_THROW(tx_energy(PowerDbm{0}, 0, e), DomainError);
  EXPECT_THROW(rx_energy(0, e), DomainError);
}

TEST(Validation, RejectsBadParameters) {
  LinkBudgetParams p;
  p.margin_m = 0.5;
  EXPECT_THROW(validate(p), ConfigError);
  p = {};
  p.frequency_hz = 0;
  EXPECT_THROW(validate(p), ConfigError);
  EXPECT_THROW(validate(PrrParams{0.0, 0.0}), ConfigError);
  EnergyModelParams e;
  e.data_bits = 0;
  EXPECT_THROW(validate(e), ConfigError);
}

}  // namespace
}  // namespace east
