#pragma once

// EAST transmission power controller: beacon/ACK loss estimation, the
// three-region partition, neighbour-count feedback and the power
// assignment rules. Also the classical single-region baseline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "east/error.hpp"
#include "east/radio_models.hpp"
#include "east/region.hpp"
#include "east/topology.hpp"

namespace east {

using LossMap = std::map<std::uint32_t, RssiLossDbm>;

struct RegionConfig {
  RssiLossDbm boundary_high{-0.61};  // A/B cut
  RssiLossDbm boundary_low{-5.17};   // B/C cut
  PerRegion<RssiLossDbm> threshold_loss{RssiLossDbm{3.78}, RssiLossDbm{-0.61},
                                        RssiLossDbm{-5.17}};

  PowerDbm threshold_level(RegionId r) const {
    return power_level_for_rssi_loss(threshold_loss[index(r)]);
  }
};

inline void validate(const RegionConfig& cfg) {
  if (!(cfg.boundary_low < cfg.boundary_high))
    throw ConfigError("regions.boundary_low must be < regions.boundary_high");
  for (auto r : kRegions) {
    const auto loss = cfg.threshold_loss[index(r)].value;
    if (!std::isfinite(loss) || loss <= -constants::kLevelOffsetDb)
      throw ConfigError("regions.threshold_loss_" + std::string(name(r)) +
                        " must be finite and > -40");
  }
}

struct RegionPartition {
  std::map<std::uint32_t, RegionId> assignment;
  PerRegion<std::size_t> counts{};
};

struct ControlTraffic {
  std::uint64_t beacons_sent = 0;
  std::uint64_t acks_sent = 0;

  std::uint64_t total() const { return beacons_sent + acks_sent; }
  bool operator==(const ControlTraffic&) const = default;
};

struct ControllerState {
  PerRegion<std::size_t> n_current{};
  PerRegion<std::size_t> n_desired{};
  PerRegion<std::optional<std::size_t>> last_closed_loop_round{};
  LossMap last_estimated_loss;

  // e(t) = n_d - n_c
  long error(RegionId r) const {
    return static_cast<long>(n_desired[index(r)]) - static_cast<long>(n_current[index(r)]);
  }
};

struct Cadence {
  std::size_t period = 10;  // K, rounds between forced exchanges
  double drift_db = 1.0;    // delta, open-loop drift that forces an exchange
};

inline void validate(const Cadence& c) {
  if (c.period == 0) throw ConfigError("cadence.period must be >= 1");
  if (!(c.drift_db >= 0) || !std::isfinite(c.drift_db))
    throw ConfigError("cadence.drift_db must be >= 0");
}

/// One beacon from the reference node; every alive node in a selected
/// region answers with an ACK and its loss is read off the temperature
/// relation. Nodes without a region yet count as selected. Returns nullopt
/// when no node is alive.
inline std::optional<LossMap> estimate_rssi_loss(std::span<const NodeState> nodes,
                                                 ControlTraffic& traffic,
                                                 PerRegion<bool> selected = {true, true, true}) {
  const bool any_alive =
      std::any_of(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.alive; });
  if (!any_alive) return std::nullopt;
  LossMap losses;
  traffic.beacons_sent += 1;
  for (const auto& node : nodes) {
    if (!node.alive) continue;
    if (node.region && !selected[index(*node.region)]) continue;
    losses.emplace(node.id, rssi_loss_from_temperature(node.current_temp));
    traffic.acks_sent += 1;
  }
  return losses;
}

inline RegionId classify(RssiLossDbm loss, const RegionConfig& cfg) {
  if (loss > cfg.boundary_high) return RegionId::A;
  if (loss > cfg.boundary_low) return RegionId::B;
  return RegionId::C;
}

inline RegionPartition partition_regions(const LossMap& losses, const RegionConfig& cfg) {
  RegionPartition p;
  for (const auto& [id, loss] : losses) {
    const auto r = classify(loss, cfg);
    p.assignment.emplace(id, r);
    ++p.counts[index(r)];
  }
  return p;
}

inline constexpr std::size_t kNeighborSlack = 5;

/// n_d = n_c(0) - 5 per region; a region of five or fewer nodes has no
/// meaningful set point and is rejected.
inline PerRegion<std::size_t> init_desired_neighbors(const RegionPartition& p) {
  PerRegion<std::size_t> desired{};
  for (auto r : kRegions) {
    const auto count = p.counts[index(r)];
    if (count <= kNeighborSlack)
      throw ConfigError("region " + std::string(name(r)) + " has " + std::to_string(count) +
                        " nodes; at least 6 are needed for a desired-neighbour set point");
    desired[index(r)] = count - kNeighborSlack;
  }
  return desired;
}

/// Same relation, saturating at zero for small regions.
inline PerRegion<std::size_t> init_desired_neighbors_saturating(const RegionPartition& p) {
  PerRegion<std::size_t> desired{};
  for (auto r : kRegions) {
    const auto count = p.counts[index(r)];
    desired[index(r)] = count > kNeighborSlack ? count - kNeighborSlack : 0;
  }
  return desired;
}

/// Power assignment rules for a node in region r with measured loss:
///   loss >= threshold, n_c >= n_d : region threshold level
///   loss >= threshold, n_c <  n_d : own compensation level, never below previous
///   loss <  threshold             : keep previous level
inline PowerDbm east_assign(RegionId r, RssiLossDbm loss, PowerDbm previous,
                            const ControllerState& state, const RegionConfig& cfg) {
  const auto i = index(r);
  if (loss < cfg.threshold_loss[i]) return previous;
  if (state.n_current[i] >= state.n_desired[i]) return cfg.threshold_level(r);
  return std::max(previous, power_level_for_rssi_loss(loss));
}

/// Worst-case compensation applied to every node by the baseline.
inline PowerDbm classical_assign(TemperatureC t_max) {
  return power_level_for_rssi_loss(rssi_loss_from_temperature(t_max));
}

/// Whether region r must run a beacon/ACK exchange this round: no estimate
/// yet, the period has elapsed, or some member's locally predicted loss has
/// drifted more than the tolerance from its last estimate.
inline bool needs_closed_loop(RegionId r, std::size_t round, const ControllerState& state,
                              const Cadence& cadence, const RegionPartition& partition,
                              const LossMap& predicted) {
  const auto& last = state.last_closed_loop_round[index(r)];
  if (!last) return true;
  if (round >= *last && round - *last >= cadence.period) return true;
  double max_drift = 0.0;
  for (const auto& [id, region] : partition.assignment) {
    if (region != r) continue;
    const auto p = predicted.find(id);
    const auto e = state.last_estimated_loss.find(id);
    if (p == predicted.end() || e == state.last_estimated_loss.end()) continue;
    max_drift = std::max(max_drift, std::abs(p->second.value - e->second.value));
  }
  return max_drift > cadence.drift_db;
}

}  // namespace east
