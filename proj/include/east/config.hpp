#pragma once

// Simulation configuration: defaults, flat `key = value` text format with
// dotted keys, validation and content fingerprint.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "east/error.hpp"
#include "east/protocol.hpp"
#include "east/radio_models.hpp"
#include "east/rng.hpp"
#include "east/topology.hpp"

namespace east {

enum class ControllerKind { east, classical };
enum class PrrMode { expected, sampled };

inline std::string_view to_string(ControllerKind k) {
  return k == ControllerKind::east ? "east" : "classical";
}

struct SimConfig {
  std::size_t node_count = 100;
  double area_side = 100.0;
  std::size_t rounds = 1200;
  std::uint64_t seed = 1;
  ControllerKind controller = ControllerKind::east;
  TemperatureProcess temperature;
  std::string trace_path;
  LinkBudgetParams link;
  RegionConfig regions;
  Cadence cadence;
  PrrParams prr;
  PrrMode prr_mode = PrrMode::expected;
  EnergyModelParams energy;
  PowerDbm level_cap{48.7};
};

inline void validate(const SimConfig& c) {
  if (c.node_count == 0) throw ConfigError("nodes must be >= 1");
  if (!(c.area_side > 0) || !std::isfinite(c.area_side))
    throw ConfigError("area_side must be > 0");
  if (c.rounds == 0) throw ConfigError("rounds must be >= 1");
  validate(c.temperature);
  validate(c.link);
  validate(c.regions);
  validate(c.cadence);
  validate(c.prr);
  validate(c.energy);
  if (!std::isfinite(c.level_cap.value)) throw ConfigError("level_cap_dbm must be finite");
  for (auto r : kRegions) {
    if (c.level_cap < c.regions.threshold_level(r))
      throw ConfigError("level_cap_dbm must be >= power level of regions.threshold_loss_" +
                        std::string(1, static_cast<char>('a' + index(r))) + " (" +
                        fmt::format("{:.4f}", c.regions.threshold_level(r).value) + " dBm)");
  }
  if (c.temperature.mode == TemperatureMode::trace && c.temperature.trace) {
    const auto& t = *c.temperature.trace;
    if (t.node_count != c.node_count || t.round_count != c.rounds)
      throw ConfigError("temperature.trace_path does not match nodes x rounds");
  }
}

namespace config_detail {

enum class Kind { uint, real, text };

struct Key {
  std::string_view name;
  Kind kind;
  std::function<std::string(const SimConfig&)> get;
  std::function<void(SimConfig&, std::string_view)> set;
};

inline std::string fmt_real(double v) { return fmt::format("{}", v); }

template <typename T>
T parse_as(std::string_view key, std::string_view text);

template <>
inline std::uint64_t parse_as<std::uint64_t>(std::string_view key, std::string_view text) {
  const auto v = detail::parse_number<std::uint64_t>(text);
  if (!v)
    throw ConfigError(fmt::format("{}: expected unsigned integer, got '{}'", key, text));
  return *v;
}

template <>
inline double parse_as<double>(std::string_view key, std::string_view text) {
  const auto v = detail::parse_number<double>(text);
  if (!v || !std::isfinite(*v))
    throw ConfigError(fmt::format("{}: expected finite number, got '{}'", key, text));
  return *v;
}

inline std::uint32_t parse_bits(std::string_view key, std::string_view text) {
  const auto v = parse_as<std::uint64_t>(key, text);
  if (v > std::numeric_limits<std::uint32_t>::max())
    throw ConfigError(fmt::format("{}: value too large", key));
  return static_cast<std::uint32_t>(v);
}

#define EAST_REAL_KEY(NAME, FIELD)                                                \
  Key {                                                                           \
    NAME, Kind::real, [](const SimConfig& c) { return fmt_real(c.FIELD); },       \
        [](SimConfig& c, std::string_view v) { c.FIELD = parse_as<double>(NAME, v); } \
  }

#define EAST_BITS_KEY(NAME, FIELD)                                                 \
  Key {                                                                            \
    NAME, Kind::uint, [](const SimConfig& c) { return std::to_string(c.FIELD); },  \
        [](SimConfig& c, std::string_view v) { c.FIELD = parse_bits(NAME, v); }    \
  }

// Sorted by name; write_config relies on this order.
inline const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      EAST_REAL_KEY("area_side", area_side),
      Key{"cadence.drift_db", Kind::real,
          [](const SimConfig& c) { return fmt_real(c.cadence.drift_db); },
          [](SimConfig& c, std::string_view v) {
            c.cadence.drift_db = parse_as<double>("cadence.drift_db", v);
          }},
      Key{"cadence.period", Kind::uint,
          [](const SimConfig& c) { return std::to_string(c.cadence.period); },
          [](SimConfig& c, std::string_view v) {
            c.cadence.period = parse_as<std::uint64_t>("cadence.period", v);
          }},
      Key{"controller", Kind::text,
          [](const SimConfig& c) { return std::string(to_string(c.controller)); },
          [](SimConfig& c, std::string_view v) {
            if (v == "east") c.controller = ControllerKind::east;
            else if (v == "classical") c.controller = ControllerKind::classical;
            else throw ConfigError(fmt::format("controller: expected east|classical, got '{}'", v));
          }},
      EAST_BITS_KEY("energy.ack_bits", energy.ack_bits),
      EAST_BITS_KEY("energy.beacon_bits", energy.beacon_bits),
      EAST_REAL_KEY("energy.bitrate_bps", energy.bitrate_bps),
      EAST_BITS_KEY("energy.data_bits", energy.data_bits),
      EAST_REAL_KEY("energy.e_elec_j_per_bit", energy.e_elec_j_per_bit),
      EAST_REAL_KEY("energy.initial_battery_j", energy.initial_battery_j),
      EAST_REAL_KEY("level_cap_dbm", level_cap.value),
      EAST_REAL_KEY("link_budget.bandwidth_hz", link.bandwidth_hz),
      EAST_REAL_KEY("link_budget.eb_n0_db", link.eb_n0_db),
      EAST_REAL_KEY("link_budget.eta", link.eta),
      EAST_REAL_KEY("link_budget.frequency_hz", link.frequency_hz),
      EAST_REAL_KEY("link_budget.margin_m", link.margin_m),
      EAST_REAL_KEY("link_budget.rnf_db", link.rnf_db),
      EAST_REAL_KEY("link_budget.snr_db", link.snr_db),
      EAST_REAL_KEY("link_budget.temperature_kelvin", link.temperature_kelvin),
      Key{"nodes", Kind::uint, [](const SimConfig& c) { return std::to_string(c.node_count); },
          [](SimConfig& c, std::string_view v) {
            c.node_count = parse_as<std::uint64_t>("nodes", v);
          }},
      EAST_REAL_KEY("prr.alpha", prr.alpha),
      EAST_REAL_KEY("prr.beta", prr.beta),
      Key{"prr.mode", Kind::text,
          [](const SimConfig& c) {
            return std::string(c.prr_mode == PrrMode::expected ? "expected" : "sampled");
          },
          [](SimConfig& c, std::string_view v) {
            if (v == "expected") c.prr_mode = PrrMode::expected;
            else if (v == "sampled") c.prr_mode = PrrMode::sampled;
            else throw ConfigError(fmt::format("prr.mode: expected expected|sampled, got '{}'", v));
          }},
      EAST_REAL_KEY("regions.boundary_high", regions.boundary_high.value),
      EAST_REAL_KEY("regions.boundary_low", regions.boundary_low.value),
      EAST_REAL_KEY("regions.threshold_loss_a", regions.threshold_loss[0].value),
      EAST_REAL_KEY("regions.threshold_loss_b", regions.threshold_loss[1].value),
      EAST_REAL_KEY("regions.threshold_loss_c", regions.threshold_loss[2].value),
      Key{"rounds", Kind::uint, [](const SimConfig& c) { return std::to_string(c.rounds); },
          [](SimConfig& c, std::string_view v) { c.rounds = parse_as<std::uint64_t>("rounds", v); }},
      Key{"seed", Kind::uint, [](const SimConfig& c) { return std::to_string(c.seed); },
          [](SimConfig& c, std::string_view v) { c.seed = parse_as<std::uint64_t>("seed", v); }},
      Key{"temperature.mode", Kind::text,
          [](const SimConfig& c) {
            return std::string(c.temperature.mode == TemperatureMode::synthetic ? "synthetic"
                                                                                : "trace");
          },
          [](SimConfig& c, std::string_view v) {
            if (v == "synthetic") c.temperature.mode = TemperatureMode::synthetic;
            else if (v == "trace") c.temperature.mode = TemperatureMode::trace;
            else throw ConfigError(fmt::format("temperature.mode: expected synthetic|trace, got '{}'", v));
          }},
      EAST_REAL_KEY("temperature.t_max", temperature.t_max.value),
      EAST_REAL_KEY("temperature.t_min", temperature.t_min.value),
      Key{"temperature.trace_path", Kind::text, [](const SimConfig& c) { return c.trace_path; },
          [](SimConfig& c, std::string_view v) { c.trace_path = std::string(v); }},
      EAST_REAL_KEY("temperature.walk_sigma", temperature.walk_sigma),
  };
  return table;
}

#undef EAST_REAL_KEY
#undef EAST_BITS_KEY

inline const Key* find_key(std::string_view name) {
  for (const auto& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

}  // namespace config_detail

/// Names of all recognised keys, sorted.
inline std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : config_detail::keys()) out.emplace_back(k.name);
  return out;
}

inline bool is_numeric_key(std::string_view key) {
  const auto* k = config_detail::find_key(key);
  return k && k->kind != config_detail::Kind::text;
}

/// Applies one `key = value` assignment.
inline void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value) {
  const auto* k = config_detail::find_key(key);
  if (!k) throw ConfigError(fmt::format("unknown key '{}'", key));
  k->set(cfg, value);
}

inline std::string get_config_value(const SimConfig& cfg, std::string_view key) {
  const auto* k = config_detail::find_key(key);
  if (!k) throw ConfigError(fmt::format("unknown key '{}'", key));
  return k->get(cfg);
}

/// Splits "key=value" (whitespace around either side ignored).
inline std::pair<std::string, std::string> split_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError(fmt::format("expected key=value, got '{}'", text));
  const auto key = detail::trim(text.substr(0, eq));
  const auto value = detail::trim(text.substr(eq + 1));
  if (key.empty()) throw ConfigError(fmt::format("missing key in '{}'", text));
  return {std::string(key), std::string(value)};
}

/// Applies config text on top of `cfg`. Unknown keys and duplicates are
/// errors; the message carries the line number and key.
inline void apply_config_text(SimConfig& cfg, std::istream& in, std::string_view origin) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos)
      text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    try {
      auto [key, value] = split_assignment(text);
      for (const auto& s : seen)
        if (s == key) throw ConfigError(fmt::format("duplicate key '{}'", key));
      set_config_value(cfg, key, value);
      seen.push_back(key);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin, line_no, e.what()));
    }
  }
}

/// Loads the temperature trace named by the config when trace mode is on.
/// Relative paths resolve against `base_dir`.
inline void resolve_trace(SimConfig& cfg, const std::filesystem::path& base_dir) {
  if (cfg.temperature.mode != TemperatureMode::trace) {
    cfg.temperature.trace.reset();
    return;
  }
  if (cfg.trace_path.empty())
    throw ConfigError("temperature.trace_path is required when temperature.mode = trace");
  std::filesystem::path path = cfg.trace_path;
  if (path.is_relative()) path = base_dir / path;
  if (!std::filesystem::exists(path))
    throw ConfigError("temperature.trace_path: no such file " + path.string());
  TraceBounds bounds{cfg.node_count, cfg.rounds, cfg.temperature.t_min, cfg.temperature.t_max};
  try {
    auto proc = load_temperature_trace(path, bounds);
    cfg.temperature.trace = std::move(proc.trace);
  } catch (const DataError& e) {
    throw ConfigError(std::string("temperature.trace_path: ") + e.what());
  }
}

/// Defaults, then the file (if any), then overrides in order; validated.
inline SimConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const std::vector<std::string>& overrides = {}) {
  SimConfig cfg;
  std::filesystem::path base_dir = ".";
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config file " + path->string());
    apply_config_text(cfg, in, path->string());
    base_dir = path->parent_path().empty() ? "." : path->parent_path();
  }
  for (const auto& o : overrides) {
    auto [key, value] = split_assignment(o);
    set_config_value(cfg, key, value);
  }
  resolve_trace(cfg, base_dir);
  validate(cfg);
  return cfg;
}

inline SimConfig parse_config_text(std::string_view text,
                                   const std::vector<std::string>& overrides = {}) {
  SimConfig cfg;
  std::istringstream in{std::string(text)};
  apply_config_text(cfg, in, "<text>");
  for (const auto& o : overrides) {
    auto [key, value] = split_assignment(o);
    set_config_value(cfg, key, value);
  }
  resolve_trace(cfg, ".");
  validate(cfg);
  return cfg;
}

/// Canonical text form: every key, sorted, one `key = value` per line.
inline std::string write_config(const SimConfig& cfg) {
  std::string out;
  for (const auto& k : config_detail::keys()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

/// Content hash of the canonical form, so key order in the source file
/// does not matter. Keys listed in `exclude_prefixes` are left out.
inline std::string config_fingerprint(const SimConfig& cfg,
                                      const std::vector<std::string_view>& exclude_prefixes = {}) {
  std::string canon;
  for (const auto& k : config_detail::keys()) {
    bool skip = false;
    for (auto p : exclude_prefixes)
      if (k.name.substr(0, p.size()) == p) skip = true;
    if (skip) continue;
    canon += fmt::format("{}={}\n", k.name, k.get(cfg));
  }
  return fmt::format("{:016x}", rng::fnv1a(canon));
}

/// Fingerprint of everything that defines the scenario, i.e. all keys
/// except those selecting or tuning the controller.
inline std::string scenario_fingerprint(const SimConfig& cfg) {
  return config_fingerprint(cfg, {"controller", "cadence."});
}

}  // namespace east
