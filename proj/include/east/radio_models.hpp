#pragma once

// Temperature compensation, free-space link budget, reception and energy
// models. Everything here is a pure function of its arguments.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "east/error.hpp"
#include "east/units.hpp"

namespace east {

namespace constants {
inline constexpr double kBoltzmann = 1.380649e-23;     // J/K
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kReferenceTempC = 25.0;        // zero-loss temperature
inline constexpr double kLossPerDegree = 0.1996;       // dB per degree C
inline constexpr double kLevelOffsetDb = 40.0;
inline constexpr double kLevelScaleDb = 12.0;
inline constexpr double kLevelExponent = 2.91;
}  // namespace constants

struct LinkBudgetParams {
  double eta = 0.0029;
  double eb_n0_db = 8.3;
  double snr_db = 0.20;  // kept for completeness; the budget uses Eb/N0 only
  double bandwidth_hz = 83.5e6;
  double frequency_hz = 2.45e9;
  double rnf_db = 5.0;
  double temperature_kelvin = 300.0;
  double margin_m = 1.0;

  double wavelength_m() const { return constants::kSpeedOfLight / frequency_hz; }
};

struct PrrParams {
  double alpha = 0.5;   // per dB
  double beta = -4.0;   // dB
};

struct EnergyModelParams {
  double e_elec_j_per_bit = 50e-9;
  double bitrate_bps = 250e3;
  std::uint32_t beacon_bits = 256;
  std::uint32_t ack_bits = 256;
  std::uint32_t data_bits = 1024;
  double initial_battery_j = 2.0;
};

namespace detail {
inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}
}  // namespace detail

inline void validate(const LinkBudgetParams& p) {
  if (!(p.eta > 0)) throw ConfigError("link_budget.eta must be > 0");
  if (!(p.bandwidth_hz > 0)) throw ConfigError("link_budget.bandwidth_hz must be > 0");
  if (!(p.frequency_hz > 0)) throw ConfigError("link_budget.frequency_hz must be > 0");
  if (!(p.temperature_kelvin > 0))
    throw ConfigError("link_budget.temperature_kelvin must be > 0");
  if (!(p.margin_m >= 1)) throw ConfigError("link_budget.margin_m must be >= 1");
  for (double v : {p.eb_n0_db, p.snr_db, p.rnf_db})
    if (!std::isfinite(v)) throw ConfigError("link_budget dB terms must be finite");
}

inline void validate(const PrrParams& q) {
  if (!(q.alpha > 0)) throw ConfigError("prr.alpha must be > 0");
  if (!std::isfinite(q.beta)) throw ConfigError("prr.beta must be finite");
}

inline void validate(const EnergyModelParams& e) {
  if (!(e.e_elec_j_per_bit > 0)) throw ConfigError("energy.e_elec_j_per_bit must be > 0");
  if (!(e.bitrate_bps > 0)) throw ConfigError("energy.bitrate_bps must be > 0");
  if (e.beacon_bits == 0) throw ConfigError("energy.beacon_bits must be > 0");
  if (e.ack_bits == 0) throw ConfigError("energy.ack_bits must be > 0");
  if (e.data_bits == 0) throw ConfigError("energy.data_bits must be > 0");
  if (!(e.initial_battery_j > 0)) throw ConfigError("energy.initial_battery_j must be > 0");
}

/// Transmit-power loss caused by ambient temperature, linear around 25 C.
inline RssiLossDbm rssi_loss_from_temperature(TemperatureC t) {
  detail::require_finite(t.value, "temperature");
  return {constants::kLossPerDegree * (t.value - constants::kReferenceTempC)};
}

/// Power level that compensates a given RSSI loss (least-squares power fit).
/// Defined only for loss > -40 dB, where the base of the power is positive.
inline PowerDbm power_level_for_rssi_loss(RssiLossDbm loss) {
  detail::require_finite(loss.value, "rssi loss");
  const double base = (loss.value + constants::kLevelOffsetDb) / constants::kLevelScaleDb;
  if (!(base > 0)) throw DomainError("rssi loss must be > -40 dB");
  return {std::pow(base, constants::kLevelExponent)};
}

/// Free-space link budget in the dB domain:
///   10log(eta) + Eb/N0 + 10log(m k T B / 1 mW) + 20log(4 pi d / lambda) + RNF
inline PowerDbm free_space_base_requirement(Meters d, const LinkBudgetParams& p) {
  detail::require_finite(d.value, "distance");
  if (!(d.value > 0)) throw DomainError("distance must be > 0");
  const double noise_w =
      p.margin_m * constants::kBoltzmann * p.temperature_kelvin * p.bandwidth_hz;
  const double path = 4.0 * std::numbers::pi * d.value / p.wavelength_m();
  return {10.0 * std::log10(p.eta) + p.eb_n0_db + 10.0 * std::log10(noise_w / 1e-3) +
          20.0 * std::log10(path) + p.rnf_db};
}

inline PowerDbm required_transmit_power(Meters d, PowerDbm level, const LinkBudgetParams& p) {
  return {free_space_base_requirement(d, p).value + level.value};
}

inline PowerWatts dbm_to_watts(PowerDbm p) {
  detail::require_finite(p.value, "power");
  return {std::pow(10.0, (p.value - 30.0) / 10.0)};
}

inline PowerDbm watts_to_dbm(PowerWatts w) {
  detail::require_finite(w.value, "power");
  if (!(w.value > 0)) throw DomainError("power in watts must be > 0");
  return {10.0 * std::log10(w.value) + 30.0};
}

/// Logistic packet reception ratio as a function of link margin (dB).
inline double prr_from_margin(double margin_db, const PrrParams& q) {
  detail::require_finite(margin_db, "margin");
  return 1.0 / (1.0 + std::exp(-q.alpha * (margin_db - q.beta)));
}

// First-order radio model: electronics cost per bit plus radiated power
// over the packet airtime.
inline Joules tx_energy(PowerDbm p_t, std::uint32_t bits, const EnergyModelParams& e) {
  if (bits == 0) throw DomainError("packet must carry at least one bit");
  const double airtime_s = static_cast<double>(bits) / e.bitrate_bps;
  return {e.e_elec_j_per_bit * bits + dbm_to_watts(p_t).value * airtime_s};
}

inline Joules rx_energy(std::uint32_t bits, const EnergyModelParams& e) {
  if (bits == 0) throw DomainError("packet must carry at least one bit");
  return {e.e_elec_j_per_bit * bits};
}

}  // namespace east
