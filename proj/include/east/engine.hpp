#pragma once

// Discrete-round simulation engine. Each round runs, in order:
//   1. advance temperatures
//   2. controller step (beacon/ACK exchange where required, else open loop)
//   3. transmit power p_t = free-space base requirement + assigned level
//   4. one data packet per alive node, PRR from link margin
//   5. debit control and data energy
//   6. nodes with an empty battery die
//   7. emit the round record

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "east/config.hpp"
#include "east/protocol.hpp"
#include "east/radio_models.hpp"
#include "east/rng.hpp"
#include "east/topology.hpp"

namespace east {

// Nodes closer than this to the reference use this distance in the budget.
inline constexpr double kMinLinkDistanceM = 1.0;

struct NodeSnapshot {
  TemperatureC temp;
  RssiLossDbm loss;
  PowerDbm level;
  PowerDbm p_t;
  std::optional<double> prr;  // set when the node sent a data packet
  double battery_j = 0.0;
  bool alive = true;
  std::optional<RegionId> region;

  bool operator==(const NodeSnapshot&) const = default;
};

struct RoundRecord {
  std::size_t round = 0;
  ControllerKind controller = ControllerKind::east;
  ControlTraffic traffic;
  double tx_energy_j = 0.0;
  double rx_energy_j = 0.0;
  std::size_t alive = 0;
  PerRegion<std::size_t> alive_by_region{};
  PerRegion<std::optional<double>> prr_by_region{};  // mean over senders
  std::vector<NodeSnapshot> nodes;

  bool operator==(const RoundRecord&) const = default;
};

struct EnergyLedger {
  double tx_j = 0.0;
  double rx_j = 0.0;
  double control_j = 0.0;
  double data_j = 0.0;

  double total() const { return tx_j + rx_j; }
};

struct SimSummary {
  std::size_t rounds_executed = 0;
  std::optional<std::size_t> extinction_round;
  ControlTraffic traffic;
  EnergyLedger energy;
  double initial_battery_j = 0.0;
  double final_battery_j = 0.0;
  PerRegion<std::size_t> initial_counts{};
  PerRegion<std::size_t> desired{};
};

struct SimResult {
  std::vector<RoundRecord> records;
  std::vector<NodeState> final_nodes;
  Position reference_pos;
  SimSummary summary;
};

class Simulation {
 public:
  explicit Simulation(SimConfig config) : cfg_(std::move(config)) {
    validate(cfg_);
    deployment_ = deploy_random(cfg_.node_count, cfg_.area_side, cfg_.seed);
    walks_.reserve(deployment_.nodes.size());
    base_requirement_.reserve(deployment_.nodes.size());
    for (auto& node : deployment_.nodes) {
      node.base_temp = base_temperature(node.id, cfg_.temperature, cfg_.seed);
      node.current_temp = node.base_temp;
      node.battery_j = cfg_.energy.initial_battery_j;
      walks_.emplace_back(node.id, node.base_temp, cfg_.temperature, cfg_.seed);
      const double d =
          std::max(distance(node.pos, deployment_.reference_pos).value, kMinLinkDistanceM);
      base_requirement_.push_back(free_space_base_requirement(Meters{d}, cfg_.link));
      summary_.initial_battery_j += node.battery_j;
    }
    classical_level_ = std::min(classical_assign(cfg_.temperature.t_max), cfg_.level_cap);
  }

  // Temperature walks keep a pointer into cfg_.
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const SimConfig& config() const { return cfg_; }
  const Deployment& deployment() const { return deployment_; }
  const ControllerState& controller_state() const { return state_; }
  const RegionPartition& partition() const { return partition_; }
  const SimSummary& summary() const { return summary_; }
  std::size_t next_round() const { return round_; }

  bool any_alive() const {
    return std::any_of(deployment_.nodes.begin(), deployment_.nodes.end(),
                       [](const NodeState& n) { return n.alive; });
  }

  /// Executes the next round. Returns nullopt once every node is dead.
  std::optional<RoundRecord> run_round() {
    if (!any_alive()) return std::nullopt;
    const std::size_t round = round_;
    auto& nodes = deployment_.nodes;

    // 1. temperatures
    if (round > 0)
      for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].current_temp = walks_[i].advance();

    LossMap predicted;
    for (const auto& node : nodes)
      if (node.alive) predicted.emplace(node.id, rssi_loss_from_temperature(node.current_temp));

    // 2. controller
    ControlTraffic traffic;
    std::vector<bool> exchanged(nodes.size(), false);
    if (round == 0) form_regions(traffic, exchanged);
    else if (cfg_.controller == ControllerKind::east) closed_loop_step(round, predicted, traffic, exchanged);
    else full_exchange(traffic, exchanged);

    for (auto& node : nodes) {
      if (!node.alive) continue;
      PowerDbm level = classical_level_;
      if (cfg_.controller == ControllerKind::east)
        level = east_assign(*node.region, predicted.at(node.id), node.assigned_level, state_,
                            cfg_.regions);
      node.assigned_level = std::min(level, cfg_.level_cap);
      // 3. transmit power
      node.assigned_pt = PowerDbm{base_requirement_[node.id].value + node.assigned_level.value};
    }

    // 4.-5. data packets, PRR, energy
    RoundRecord rec;
    rec.round = round;
    rec.controller = cfg_.controller;
    rec.traffic = traffic;
    rec.nodes.resize(nodes.size());
    PerRegion<double> prr_sum{};
    PerRegion<std::size_t> senders{};
    for (auto& node : nodes) {
      auto& snap = rec.nodes[node.id];
      snap.temp = node.current_temp;
      snap.loss = rssi_loss_from_temperature(node.current_temp);
      snap.level = node.assigned_level;
      snap.p_t = node.assigned_pt;
      snap.region = node.region;
      if (!node.alive) continue;

      const double margin =
          node.assigned_level.value - power_level_for_rssi_loss(snap.loss).value;
      double prr = prr_from_margin(margin, cfg_.prr);
      if (cfg_.prr_mode == PrrMode::sampled) {
        rng::Stream draw(cfg_.seed, "prr", node.id, round);
        prr = draw.uniform() < prr ? 1.0 : 0.0;
      }
      snap.prr = prr;
      prr_sum[index(*node.region)] += prr;
      ++senders[index(*node.region)];

      if (exchanged[node.id]) {
        const double rx = debit(node, rx_energy(cfg_.energy.beacon_bits, cfg_.energy).value);
        const double tx =
            debit(node, tx_energy(node.assigned_pt, cfg_.energy.ack_bits, cfg_.energy).value);
        rec.rx_energy_j += rx;
        rec.tx_energy_j += tx;
        summary_.energy.control_j += rx + tx;
      }
      const double tx =
          debit(node, tx_energy(node.assigned_pt, cfg_.energy.data_bits, cfg_.energy).value);
      rec.tx_energy_j += tx;
      summary_.energy.data_j += tx;
    }
    summary_.energy.tx_j += rec.tx_energy_j;
    summary_.energy.rx_j += rec.rx_energy_j;

    // 6. deaths
    for (auto& node : nodes) {
      if (node.alive && node.battery_j <= 0.0) {
        node.alive = false;
        partition_.assignment.erase(node.id);
        --partition_.counts[index(*node.region)];
      }
    }

    // 7. record
    for (auto& node : nodes) {
      auto& snap = rec.nodes[node.id];
      snap.alive = node.alive;
      snap.battery_j = node.battery_j;
      if (node.alive) {
        ++rec.alive;
        ++rec.alive_by_region[index(*node.region)];
      }
    }
    for (auto r : kRegions)
      if (senders[index(r)] > 0)
        rec.prr_by_region[index(r)] = prr_sum[index(r)] / static_cast<double>(senders[index(r)]);

    summary_.traffic.beacons_sent += traffic.beacons_sent;
    summary_.traffic.acks_sent += traffic.acks_sent;
    summary_.rounds_executed = round + 1;
    if (rec.alive == 0) summary_.extinction_round = round;
    ++round_;
    return rec;
  }

  SimResult finish(std::vector<RoundRecord> records) {
    SimResult out;
    out.records = std::move(records);
    out.final_nodes = deployment_.nodes;
    out.reference_pos = deployment_.reference_pos;
    summary_.final_battery_j = 0.0;
    for (const auto& n : deployment_.nodes) summary_.final_battery_j += n.battery_j;
    out.summary = summary_;
    return out;
  }

 private:
  // Round 0: every node answers the first beacon; regions and the
  // desired-neighbour set points are fixed from these losses.
  void form_regions(ControlTraffic& traffic, std::vector<bool>& exchanged) {
    auto losses = estimate_rssi_loss(deployment_.nodes, traffic);
    partition_ = partition_regions(*losses, cfg_.regions);
    state_.n_desired = init_desired_neighbors_saturating(partition_);
    state_.n_current = partition_.counts;
    state_.last_estimated_loss = *losses;
    for (auto r : kRegions) state_.last_closed_loop_round[index(r)] = 0;
    summary_.initial_counts = partition_.counts;
    summary_.desired = state_.n_desired;
    for (auto& node : deployment_.nodes) {
      if (!node.alive) continue;
      node.region = partition_.assignment.at(node.id);
      node.assigned_level = cfg_.controller == ControllerKind::east
                                ? cfg_.regions.threshold_level(*node.region)
                                : classical_level_;
      exchanged[node.id] = true;
    }
  }

  void closed_loop_step(std::size_t round, const LossMap& predicted, ControlTraffic& traffic,
                        std::vector<bool>& exchanged) {
    PerRegion<bool> triggered{};
    bool any = false;
    for (auto r : kRegions) {
      if (partition_.counts[index(r)] == 0) continue;
      triggered[index(r)] =
          needs_closed_loop(r, round, state_, cfg_.cadence, partition_, predicted);
      any = any || triggered[index(r)];
    }
    if (!any) return;
    const auto losses = estimate_rssi_loss(deployment_.nodes, traffic, triggered);
    PerRegion<std::size_t> acks{};
    for (const auto& [id, loss] : *losses) {
      state_.last_estimated_loss[id] = loss;
      ++acks[index(partition_.assignment.at(id))];
      exchanged[id] = true;
    }
    for (auto r : kRegions) {
      if (!triggered[index(r)]) continue;
      state_.n_current[index(r)] = acks[index(r)];
      state_.last_closed_loop_round[index(r)] = round;
    }
  }

  void full_exchange(ControlTraffic& traffic, std::vector<bool>& exchanged) {
    const auto losses = estimate_rssi_loss(deployment_.nodes, traffic);
    for (const auto& [id, loss] : *losses) exchanged[id] = true;
  }

  // Draws up to `amount` joules; returns what was actually drawn.
  static double debit(NodeState& node, double amount) {
    const double drawn = std::min(amount, node.battery_j);
    node.battery_j -= drawn;
    return drawn;
  }

  SimConfig cfg_;
  Deployment deployment_;
  std::vector<TemperatureWalk> walks_;
  std::vector<PowerDbm> base_requirement_;
  ControllerState state_;
  RegionPartition partition_;
  PowerDbm classical_level_;
  SimSummary summary_;
  std::size_t round_ = 0;
};

/// Runs `config.rounds` rounds, or until every node is dead.
inline SimResult run_simulation(const SimConfig& config) {
  Simulation sim(config);
  std::vector<RoundRecord> records;
  records.reserve(config.rounds);
  for (std::size_t r = 0; r < config.rounds; ++r) {
    auto rec = sim.run_round();
    if (!rec) break;
    const bool extinct = rec->alive == 0;
    records.push_back(std::move(*rec));
    if (extinct) break;
  }
  return sim.finish(std::move(records));
}

}  // namespace east
