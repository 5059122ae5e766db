#pragma once

#include <compare>

namespace east {

// Thin unit-carrying wrappers. Arithmetic is done on .value explicitly so
// that mixing dB and linear quantities always shows up at the call site.

struct TemperatureC {
  double value = 0.0;
  auto operator<=>(const TemperatureC&) const = default;
};

struct RssiLossDbm {
  double value = 0.0;
  auto operator<=>(const RssiLossDbm&) const = default;
};

struct PowerDbm {
  double value = 0.0;
  auto operator<=>(const PowerDbm&) const = default;
};

struct PowerWatts {
  double value = 0.0;
  auto operator<=>(const PowerWatts&) const = default;
};

struct Meters {
  double value = 0.0;
  auto operator<=>(const Meters&) const = default;
};

struct Joules {
  double value = 0.0;
  auto operator<=>(const Joules&) const = default;
};

}  // namespace east
