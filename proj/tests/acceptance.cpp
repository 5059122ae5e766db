// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "east/cli.hpp"
#include "east/engine.hpp"
#include "east/metrics.hpp"
#include "east/protocol.hpp"
#include "east/radio_models.hpp"
#include "oracle/compare_records.hpp"
#include "oracle/reference_executor.hpp"

namespace {

using namespace east;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Energy conservation is checked on every run made by the suite.
std::vector<std::string> g_conservation_failures;
std::size_t g_runs_checked = 0;

SimResult checked_run(const SimConfig& cfg) {
  auto res = run_simulation(cfg);
  const double drop = res.summary.initial_battery_j - res.summary.final_battery_j;
  const double spent = res.summary.energy.tx_j + res.summary.energy.rx_j;
  ++g_runs_checked;
  if (std::abs(drop - spent) > 1e-9 * std::max(std::abs(drop), 1e-300))
    g_conservation_failures.push_back(
        fmt::format("{} seed {}: drop {:.12g} vs tx+rx {:.12g}", to_string(cfg.controller),
                    cfg.seed, drop, spent));
  return res;
}

Outcome ac1_threshold_levels() {
  const double loss[3] = {3.78, -0.61, -5.17};
  const double want[3] = {43.24, 31.77, 22.21};
  Outcome o;
  for (int i = 0; i < 3; ++i) {
    const double got = power_level_for_rssi_loss(RssiLossDbm{loss[i]}).value;
    o.detail += fmt::format("{:.4f} ", got);
    if (std::abs(got - want[i]) > 0.05) o.pass = false;
  }
  o.detail += "(tol 0.05)";
  return o;
}

Outcome ac2_loss_endpoints_and_level_range() {
  Outcome o;
  const double temps[3] = {-10, 25, 53};
  const double want[3] = {-6.986, 0.0, 5.5888};
  for (int i = 0; i < 3; ++i)
    if (std::abs(rssi_loss_from_temperature(TemperatureC{temps[i]}).value - want[i]) > 1e-6)
      o.pass = false;
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k <= 6300; ++k) {
    const double t = -10.0 + k * 0.01;
    const double level = power_level_for_rssi_loss(rssi_loss_from_temperature(TemperatureC{t})).value;
    lo = std::min(lo, level);
    hi = std::max(hi, level);
  }
  if (lo < 19.0 || hi > 48.7) o.pass = false;
  if (std::abs(lo - 20.0) > 2.0 || std::abs(hi - 47.0) > 2.0) o.pass = false;
  o.detail = fmt::format("level range [{:.3f}, {:.3f}] dBm vs stated 20-47", lo, hi);
  return o;
}

Outcome ac3_desired_neighbors() {
  Outcome o;
  RegionPartition table;
  table.counts = {46, 30, 24};
  const auto d = init_desired_neighbors(table);
  if (d != PerRegion<std::size_t>{41, 25, 19}) o.pass = false;
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> c(6, 1000);
  for (int i = 0; i < 10000; ++i) {
    RegionPartition p;
    p.counts = {c(gen), c(gen), c(gen)};
    const auto nd = init_desired_neighbors(p);
    for (int r = 0; r < 3; ++r)
      if (nd[r] != p.counts[r] - 5) o.pass = false;
  }
  o.detail = fmt::format("(46,30,24) -> ({},{},{}); 10000 random partitions", d[0], d[1], d[2]);
  return o;
}

Outcome ac4_controller_truth_table() {
  Outcome o;
  const RegionConfig cfg;
  auto state = [](RegionId r, std::size_t nc, std::size_t nd) {
    ControllerState s;
    s.n_current[index(r)] = nc;
    s.n_desired[index(r)] = nd;
    return s;
  };
  // Worked examples.
  const double ex1 = east_assign(RegionId::A, RssiLossDbm{4.5}, PowerDbm{0}, state(RegionId::A, 46, 41), cfg).value;
  const double ex2 = east_assign(RegionId::C, RssiLossDbm{-6.0}, PowerDbm{22.21}, state(RegionId::C, 24, 19), cfg).value;
  const double ex3 = east_assign(RegionId::B, RssiLossDbm{0.5}, PowerDbm{31.77}, state(RegionId::B, 24, 25), cfg).value;
  if (std::abs(ex1 - 43.24) > 0.05 || ex2 != 22.21 || std::abs(ex3 - 34.4569388020839) > 1e-9)
    o.pass = false;

  // Randomised cases against a restated rule table.
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> loss(-8.0, 7.0), prev(0.0, 48.7);
  std::uniform_int_distribution<std::size_t> count(0, 60);
  std::uniform_int_distribution<int> region(0, 2);
  const int cases = 20000;
  int rule2_cases = 0;
  for (int i = 0; i < cases; ++i) {
    const auto r = kRegions[region(gen)];
    const double l = loss(gen), p = prev(gen);
    const std::size_t nc = count(gen), nd = count(gen);
    const double got = east_assign(r, RssiLossDbm{l}, PowerDbm{p}, state(r, nc, nd), cfg).value;
    const double thr = cfg.threshold_loss[index(r)].value;
    double want;
    if (l < thr) want = p;
    else if (nc >= nd) want = std::pow((thr + 40.0) / 12.0, 2.91);
    else {
      want = std::max(p, std::pow((l + 40.0) / 12.0, 2.91));
      ++rule2_cases;
      if (got < p) o.pass = false;  // never decreases
    }
    if (std::abs(got - want) > 1e-9) o.pass = false;
  }
  o.detail = fmt::format("examples {:.3f}/{:.2f}/{:.3f}; {} random cases ({} under rule ii)", ex1,
                         ex2, ex3, cases, rule2_cases);
  return o;
}

Outcome ac5_region_bands() {
  Outcome o;
  const SimConfig cfg;
  const auto start = std::chrono::steady_clock::now();
  const auto res = checked_run(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double band_lo[3] = {40, 30, 20}, band_hi[3] = {45, 35, 25};
  std::size_t in_band[3] = {0, 0, 0}, total[3] = {0, 0, 0};
  for (const auto& n : res.records.back().nodes) {
    if (!n.alive || !n.region) continue;
    const auto r = index(*n.region);
    ++total[r];
    if (n.level.value >= band_lo[r] && n.level.value <= band_hi[r]) ++in_band[r];
  }
  for (int r = 0; r < 3; ++r)
    if (total[r] == 0 || in_band[r] < 0.9 * static_cast<double>(total[r])) o.pass = false;
  if (secs >= 30.0) o.pass = false;
  o.detail = fmt::format("in band A {}/{}, B {}/{}, C {}/{}; {:.2f}s", in_band[0], total[0],
                         in_band[1], total[1], in_band[2], total[2], secs);
  return o;
}

Outcome ac6_comparative_claims() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  SimConfig east_cfg;
  SimConfig classical_cfg;
  classical_cfg.controller = ControllerKind::classical;
  const RunOutput e{east_cfg, checked_run(east_cfg)};
  const RunOutput c{classical_cfg, checked_run(classical_cfg)};
  const auto rep = compare_runs(e, c);
  if (!(rep.east.control_packets < rep.classical.control_packets)) o.pass = false;
  if (!(rep.east.energy_j < rep.classical.energy_j)) o.pass = false;

  std::vector<std::uint64_t> totals;
  for (std::size_t k : {1, 5, 10, 20}) {
    SimConfig s;
    s.cadence.period = k;
    totals.push_back(run_totals(checked_run(s).records).control_packets);
  }
  for (std::size_t i = 1; i < totals.size(); ++i)
    if (totals[i] > totals[i - 1]) o.pass = false;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 120.0) o.pass = false;
  o.detail = fmt::format(
      "packets {} vs {}, energy {:.3f} J vs {:.3f} J; K=1,5,10,20 -> {},{},{},{}; {:.2f}s",
      rep.east.control_packets, rep.classical.control_packets, rep.east.energy_j,
      rep.classical.energy_j, totals[0], totals[1], totals[2], totals[3], secs);
  return o;
}

Outcome ac7_oracle_equivalence() {
  Outcome o;
  int runs = 0;
  for (auto ctl : {ControllerKind::east, ControllerKind::classical}) {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
      SimConfig cfg;
      cfg.node_count = 5;
      cfg.rounds = 10;
      cfg.seed = seed;
      cfg.controller = ctl;
      const auto diff = oracle::first_mismatch(checked_run(cfg).records, oracle::execute(cfg));
      ++runs;
      if (!diff.empty()) {
        o.pass = false;
        o.detail += fmt::format("[{} seed {}: {}] ", to_string(ctl), seed, diff);
      }
    }
  }
  o.detail += fmt::format("{} runs of 5 nodes x 10 rounds", runs);
  return o;
}

Outcome ac8_determinism_and_conservation() {
  Outcome o;
  const auto root = fs::temp_directory_path() / fmt::format("east_acceptance_{}", ::getpid());
  fs::remove_all(root);
  std::size_t files = 0;
  for (auto ctl : {"east", "classical"}) {
    cli::Invocation inv;
    inv.overrides = {fmt::format("controller={}", ctl)};
    std::ostringstream out, err;
    inv.out_dir = root / ctl / "a";
    if (cli::cmd_run(inv, out, err) != 0) o.pass = false;
    inv.out_dir = root / ctl / "b";
    if (cli::cmd_run(inv, out, err) != 0) o.pass = false;
    for (const auto& entry : fs::recursive_directory_iterator(root / ctl / "a")) {
      if (!entry.is_regular_file()) continue;
      const auto rel = fs::relative(entry.path(), root / ctl / "a");
      ++files;
      if (report::read_file(entry.path()) != report::read_file(root / ctl / "b" / rel)) {
        o.pass = false;
        o.detail += fmt::format("[{} differs] ", rel.string());
      }
    }
  }
  fs::remove_all(root);
  // Conservation on a draining scenario as well as on every other run.
  SimConfig drain;
  drain.node_count = 40;
  drain.rounds = 400;
  drain.energy.initial_battery_j = 0.01;
  checked_run(drain);
  drain.controller = ControllerKind::classical;
  checked_run(drain);
  if (!g_conservation_failures.empty()) {
    o.pass = false;
    for (const auto& f : g_conservation_failures) o.detail += "[" + f + "] ";
  }
  o.detail += fmt::format("{} files byte-identical across reruns; conservation on {} runs", files,
                          g_runs_checked);
  return o;
}

Outcome ac9_free_space_spot_values() {
  Outcome o;
  const LinkBudgetParams p;
  const double v = free_space_base_requirement(Meters{100}, p).value;
  if (std::abs(v - (-26.45)) > 0.1) o.pass = false;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> d(1.0, 1000.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = d(gen);
    const double delta = free_space_base_requirement(Meters{2 * x}, p).value -
                         free_space_base_requirement(Meters{x}, p).value;
    worst = std::max(worst, std::abs(delta - 6.0206));
  }
  if (worst > 1e-4) o.pass = false;
  o.detail = fmt::format("base(100 m) = {:.4f} dBm; doubling law worst error {:.2e} dB", v, worst);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 threshold power levels", ac1_threshold_levels},
      {"AC2 loss endpoints and level range", ac2_loss_endpoints_and_level_range},
      {"AC3 desired-neighbour relation", ac3_desired_neighbors},
      {"AC4 controller truth table", ac4_controller_truth_table},
      {"AC5 per-region level bands", ac5_region_bands},
      {"AC6 overhead and energy vs classical", ac6_comparative_claims},
      {"AC7 reference-executor equivalence", ac7_oracle_equivalence},
      {"AC8 determinism and energy conservation", ac8_determinism_and_conservation},
      {"AC9 free-space budget spot values", ac9_free_space_spot_values},
  };
  int failed = 0;
  for (const auto& [label, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << label << " -- " << o.detail << '\n';
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed"
                            : fmt::format("{} acceptance criteria failed", failed))
            << '\n';
  return failed == 0 ? 0 : 1;
}
