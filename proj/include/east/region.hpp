#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace east {

// Logical regions by RSSI-loss severity: A high, B medium, C low.
enum class RegionId : std::uint8_t { A = 0, B = 1, C = 2 };

inline constexpr std::array<RegionId, 3> kRegions{RegionId::A, RegionId::B, RegionId::C};

inline constexpr std::size_t index(RegionId r) { return static_cast<std::size_t>(r); }

inline constexpr std::string_view name(RegionId r) {
  switch (r) {
    case RegionId::A: return "A";
    case RegionId::B: return "B";
    case RegionId::C: return "C";
  }
  return "?";
}

template <typename T>
using PerRegion = std::array<T, 3>;

}  // namespace east
