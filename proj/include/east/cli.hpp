#pragma once

// Subcommand implementations behind the east-sim executable. Each command
// returns the process exit code: 0 success, 2 config/usage error, 3 I/O.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "east/config.hpp"
#include "east/engine.hpp"
#include "east/error.hpp"
#include "east/metrics.hpp"
#include "east/report.hpp"

namespace east::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3 };

struct Invocation {
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path out_dir = "east_out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> figure_round;
  // compare
  std::vector<std::string> east_overrides;
  std::vector<std::string> classical_overrides;
  // sweep
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  std::size_t jobs = 1;
};

/// Seed precedence: command-line flag, then EAST_SEED, then the config.
inline std::optional<std::uint64_t> resolve_seed(const Invocation& inv, const char* env_value) {
  if (inv.seed) return inv.seed;
  if (env_value == nullptr || *env_value == '\0') return std::nullopt;
  const auto v = detail::parse_number<std::uint64_t>(detail::trim(env_value));
  if (!v) throw ConfigError(fmt::format("EAST_SEED: expected unsigned integer, got '{}'", env_value));
  return v;
}

inline SimConfig load_config(const Invocation& inv, const std::vector<std::string>& extra = {}) {
  auto overrides = inv.overrides;
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  if (const auto seed = resolve_seed(inv, std::getenv("EAST_SEED")))
    overrides.push_back(fmt::format("seed={}", *seed));
  return parse_config(inv.config_path, overrides);
}

/// Runs the exception-to-exit-code mapping around a command body.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

/// Writes every artifact of one run into `dir`; returns the relative file list.
inline std::vector<std::string> write_run(const std::filesystem::path& dir, const SimConfig& cfg,
                                          const SimResult& result,
                                          std::optional<std::size_t> figure_round) {
  const auto summary = summarize(result.records, cfg);
  const auto fig = emit_figure_data(result.records, figure_round.value_or(0));

  std::vector<std::pair<std::string, std::string>> files = {
      {"rounds.csv", report::rounds_csv(result.records)},
      {"nodes.csv", report::nodes_csv(result.final_nodes)},
      {"summary.csv", report::summary_csv(summary)},
  };
  for (auto& f : report::figure_files(fig)) files.push_back(std::move(f));

  std::vector<std::string> names;
  for (const auto& [rel, text] : files) {
    report::write_file(dir / rel, text);
    names.push_back(rel);
  }
  const auto& s = result.summary;
  const std::vector<std::pair<std::string, std::string>> fields = {
      {"tool", "east-sim"},
      {"tool_version", std::string(report::kToolVersion)},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"scenario_fingerprint", scenario_fingerprint(cfg)},
      {"seed", std::to_string(cfg.seed)},
      {"controller", std::string(to_string(cfg.controller))},
      {"cadence.period", std::to_string(cfg.cadence.period)},
      {"cadence.drift_db", report::num(cfg.cadence.drift_db)},
      {"rounds_requested", std::to_string(cfg.rounds)},
      {"rounds_executed", std::to_string(s.rounds_executed)},
      {"extinction_round", s.extinction_round ? std::to_string(*s.extinction_round) : "none"},
      {"figure_round", std::to_string(fig.node_round)},
  };
  report::write_file(dir / "manifest.txt", report::manifest_text(fields, names));
  names.push_back("manifest.txt");
  return names;
}

inline int cmd_run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(inv);
    const auto result = run_simulation(cfg);
    if (inv.figure_round && *inv.figure_round >= result.records.size())
      throw UsageError(fmt::format("--figure-round {} out of range (run has {} rounds)",
                                   *inv.figure_round, result.records.size()));
    write_run(inv.out_dir, cfg, result, inv.figure_round);
    const auto& s = result.summary;
    out << fmt::format("{}: {} rounds, {} control packets, {:.6f} J", to_string(cfg.controller),
                       s.rounds_executed, s.traffic.total(), s.energy.total());
    if (s.extinction_round) out << fmt::format(", all nodes dead at round {}", *s.extinction_round);
    out << '\n';
    return int{kOk};
  });
}

inline int cmd_compare(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto east_extra = inv.east_overrides;
    east_extra.push_back("controller=east");
    auto classical_extra = inv.classical_overrides;
    classical_extra.push_back("controller=classical");
    const auto east_cfg = load_config(inv, east_extra);
    const auto classical_cfg = load_config(inv, classical_extra);
    if (scenario_fingerprint(east_cfg) != scenario_fingerprint(classical_cfg))
      throw UsageError("per-variant overrides change the scenario; only controller and "
                       "cadence.* may differ between variants");

    RunOutput east{east_cfg, run_simulation(east_cfg)};
    RunOutput classical{classical_cfg, run_simulation(classical_cfg)};
    const auto rep = compare_runs(east, classical);

    write_run(inv.out_dir / "east", east.config, east.result, inv.figure_round);
    write_run(inv.out_dir / "classical", classical.config, classical.result, inv.figure_round);
    report::write_file(inv.out_dir / "compare.csv", report::compare_csv(rep));
    const std::vector<std::pair<std::string, std::string>> fields = {
        {"tool", "east-sim"},
        {"tool_version", std::string(report::kToolVersion)},
        {"scenario_fingerprint", scenario_fingerprint(east_cfg)},
        {"seed", std::to_string(east_cfg.seed)},
        {"east_dominates", rep.east_dominates ? "1" : "0"},
    };
    report::write_file(inv.out_dir / "manifest.txt",
                       report::manifest_text(fields, {"compare.csv", "east/", "classical/"}));
    out << report::compare_csv(rep);
    return int{kOk};
  });
}

struct SweepRow {
  std::string value;
  SimConfig config;
  RunTotals totals;
};

inline std::string sweep_summary_csv(std::string_view key, const std::vector<SweepRow>& rows) {
  std::string out = fmt::format("{},controller,control_packets,energy_j,survivors,mean_prr\n", key);
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{}\n", r.value, to_string(r.config.controller),
                       r.totals.control_packets, report::num(r.totals.energy_j),
                       r.totals.survivors, report::num(r.totals.mean_prr));
  return out;
}

/// One run per value of a numeric key. Runs are independent and may be
/// spread over `jobs` threads; outputs are collected by value index.
inline int cmd_sweep(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (inv.sweep_key.empty()) throw UsageError("sweep requires --key");
    if (!is_numeric_key(inv.sweep_key))
      throw UsageError(fmt::format("'{}' is not a sweepable key", inv.sweep_key));
    if (inv.sweep_values.empty()) throw UsageError("sweep requires at least one value");

    std::vector<SweepRow> rows;
    for (const auto& v : inv.sweep_values)
      rows.push_back({v, load_config(inv, {fmt::format("{}={}", inv.sweep_key, v)}), {}});

    std::vector<std::exception_ptr> failures(rows.size());
    std::size_t next = 0;
    std::mutex next_mutex;
    auto worker = [&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard lock(next_mutex);
          if (next >= rows.size()) return;
          i = next++;
        }
        try {
          const auto result = run_simulation(rows[i].config);
          rows[i].totals = run_totals(result.records);
          write_run(inv.out_dir / fmt::format("{}={}", inv.sweep_key, rows[i].value),
                    rows[i].config, result, inv.figure_round);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    const std::size_t jobs = std::clamp<std::size_t>(inv.jobs, 1, rows.size());
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);

    const auto text = sweep_summary_csv(inv.sweep_key, rows);
    report::write_file(inv.out_dir / "sweep_summary.csv", text);
    out << text;
    return int{kOk};
  });
}

inline int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto summary = report::read_file(dir / "summary.csv");
    const auto manifest = report::parse_key_values(report::read_file(dir / "manifest.txt"));
    const auto it = manifest.find("rounds_executed");
    const std::string rounds = it == manifest.end() ? "N" : it->second;
    try {
      out << report::render_summary_table(summary, rounds);
    } catch (const DataError& e) {
      throw IoError(e.what());
    }
    return int{kOk};
  });
}

}  // namespace east::cli
