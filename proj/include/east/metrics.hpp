#pragma once

// Aggregation of round records: per-region summaries, controller
// comparison and per-node / per-region figure series.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "east/config.hpp"
#include "east/engine.hpp"
#include "east/error.hpp"

namespace east {

struct RegionSummary {
  RegionId region = RegionId::A;
  std::size_t initial_count = 0;
  std::size_t desired = 0;
  std::size_t survivors = 0;
  RssiLossDbm threshold_loss;
  PowerDbm threshold_level;
  std::size_t nodes_above_threshold = 0;
  std::size_t nodes_below_threshold = 0;
  double prr_min_pct = 0.0;
  double prr_max_pct = 0.0;
};

/// Table-style summary per region. Initial counts and set points come from
/// round 0; survivors and the above/below split from the final round; the
/// PRR band is min/max of the per-round regional mean over all rounds.
inline std::vector<RegionSummary> summarize(const std::vector<RoundRecord>& records,
                                            const SimConfig& config) {
  if (records.empty()) throw DataError("summarize: no round records");
  const auto& first = records.front();
  const auto& last = records.back();

  std::vector<RegionSummary> out;
  for (auto r : kRegions) {
    RegionSummary s;
    s.region = r;
    for (const auto& n : first.nodes)
      if (n.region == r) ++s.initial_count;
    s.desired = s.initial_count > kNeighborSlack ? s.initial_count - kNeighborSlack : 0;
    s.threshold_loss = config.regions.threshold_loss[index(r)];
    s.threshold_level = config.regions.threshold_level(r);
    for (const auto& n : last.nodes) {
      if (!n.alive || n.region != r) continue;
      ++s.survivors;
      if (n.loss >= s.threshold_loss) ++s.nodes_above_threshold;
      else ++s.nodes_below_threshold;
    }
    std::optional<double> lo, hi;
    for (const auto& rec : records) {
      const auto& p = rec.prr_by_region[index(r)];
      if (!p) continue;
      lo = lo ? std::min(*lo, *p) : *p;
      hi = hi ? std::max(*hi, *p) : *p;
    }
    s.prr_min_pct = lo.value_or(0.0) * 100.0;
    s.prr_max_pct = hi.value_or(0.0) * 100.0;
    out.push_back(s);
  }
  return out;
}

struct RunTotals {
  std::uint64_t control_packets = 0;
  double energy_j = 0.0;
  std::size_t survivors = 0;
  double mean_prr = 0.0;  // over every data packet sent in the run
};

inline RunTotals run_totals(const std::vector<RoundRecord>& records) {
  RunTotals t;
  double prr_sum = 0.0;
  std::size_t packets = 0;
  for (const auto& rec : records) {
    t.control_packets += rec.traffic.total();
    t.energy_j += rec.tx_energy_j + rec.rx_energy_j;
    for (const auto& n : rec.nodes) {
      if (!n.prr) continue;
      prr_sum += *n.prr;
      ++packets;
    }
  }
  if (!records.empty()) t.survivors = records.back().alive;
  if (packets > 0) t.mean_prr = prr_sum / static_cast<double>(packets);
  return t;
}

struct ComparisonDeltas {
  double control_packets = 0.0;
  double energy_j = 0.0;
  double survivors = 0.0;
  double mean_prr = 0.0;
};

struct ComparisonReport {
  RunTotals east;
  RunTotals classical;
  ComparisonDeltas deltas;  // east - classical
  bool east_dominates = false;
};

struct RunOutput {
  SimConfig config;
  SimResult result;
};

/// Totals of two runs over the same scenario and their differences
/// (first minus second; the first is normally EAST).
inline ComparisonReport compare_runs(const RunOutput& east, const RunOutput& classical) {
  if (east.config.seed != classical.config.seed)
    throw UsageError("compare: runs use different seeds");
  if (scenario_fingerprint(east.config) != scenario_fingerprint(classical.config))
    throw UsageError("compare: runs use different scenario configurations (fingerprints " +
                     scenario_fingerprint(east.config) + " vs " +
                     scenario_fingerprint(classical.config) + ")");
  ComparisonReport rep;
  rep.east = run_totals(east.result.records);
  rep.classical = run_totals(classical.result.records);
  rep.deltas.control_packets = static_cast<double>(rep.east.control_packets) -
                               static_cast<double>(rep.classical.control_packets);
  rep.deltas.energy_j = rep.east.energy_j - rep.classical.energy_j;
  rep.deltas.survivors =
      static_cast<double>(rep.east.survivors) - static_cast<double>(rep.classical.survivors);
  rep.deltas.mean_prr = rep.east.mean_prr - rep.classical.mean_prr;
  rep.east_dominates = rep.deltas.control_packets < 0 && rep.deltas.energy_j < 0;
  return rep;
}

struct NodeValue {
  std::uint32_t node = 0;
  double value = 0.0;
};

struct RegionValue {
  RegionId region = RegionId::A;
  std::uint32_t node = 0;
  double value = 0.0;
};

struct FigureSeries {
  std::size_t node_round = 0;
  std::vector<NodeValue> temp_per_node;
  std::vector<NodeValue> loss_per_node;
  std::vector<NodeValue> level_per_node;
  std::vector<NodeValue> pt_per_node;
  std::vector<RegionValue> level_per_region_baseline;  // own compensation level
  std::vector<RegionValue> level_per_region_east;      // assigned level
};

/// Per-node series from `node_round` (all nodes), per-region series from
/// the final round (alive nodes, ordered by region then node).
inline FigureSeries emit_figure_data(const std::vector<RoundRecord>& records,
                                     std::size_t node_round = 0) {
  if (records.empty()) throw DataError("figures: no round records");
  if (node_round >= records.size())
    throw UsageError("figure round " + std::to_string(node_round) + " out of range [0, " +
                     std::to_string(records.size() - 1) + "]");
  FigureSeries fig;
  fig.node_round = node_round;
  const auto& rec = records[node_round];
  for (std::uint32_t i = 0; i < rec.nodes.size(); ++i) {
    const auto& n = rec.nodes[i];
    fig.temp_per_node.push_back({i, n.temp.value});
    fig.loss_per_node.push_back({i, n.loss.value});
    fig.level_per_node.push_back({i, n.level.value});
    fig.pt_per_node.push_back({i, n.p_t.value});
  }
  const auto& last = records.back();
  for (auto r : kRegions) {
    for (std::uint32_t i = 0; i < last.nodes.size(); ++i) {
      const auto& n = last.nodes[i];
      if (!n.alive || n.region != r) continue;
      fig.level_per_region_baseline.push_back({r, i, power_level_for_rssi_loss(n.loss).value});
      fig.level_per_region_east.push_back({r, i, n.level.value});
    }
  }
  return fig;
}

}  // namespace east
