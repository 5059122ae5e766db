#pragma once

// Node deployment, geometry and the per-node temperature process.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "east/error.hpp"
#include "east/region.hpp"
#include "east/rng.hpp"
#include "east/units.hpp"

namespace east {

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

inline Meters distance(Position a, Position b) { return {std::hypot(a.x - b.x, a.y - b.y)}; }

struct NodeState {
  std::uint32_t id = 0;
  Position pos;
  TemperatureC base_temp;
  TemperatureC current_temp;
  double battery_j = 0.0;
  PowerDbm assigned_level;
  PowerDbm assigned_pt;
  bool alive = true;
  std::optional<RegionId> region;

  bool operator==(const NodeState&) const = default;
};

struct Deployment {
  std::vector<NodeState> nodes;
  Position reference_pos;
  double area_side = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const Deployment&) const = default;
};

/// Uniform placement over the square [0, side]^2. The reference node sits
/// at the midpoint of the left edge.
inline Deployment deploy_random(std::size_t n, double area_side, std::uint64_t seed) {
  if (n == 0) throw ConfigError("nodes: at least one node is required");
  if (!(area_side > 0)) throw ConfigError("area_side must be > 0");
  Deployment d;
  d.area_side = area_side;
  d.seed = seed;
  d.reference_pos = {0.0, area_side / 2.0};
  rng::Stream stream(seed, "deploy");
  d.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    NodeState node;
    node.id = static_cast<std::uint32_t>(i);
    node.pos.x = stream.uniform() * area_side;
    node.pos.y = stream.uniform() * area_side;
    d.nodes.push_back(node);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Temperature

enum class TemperatureMode { synthetic, trace };

/// Dense (node, round) -> Celsius table.
struct TemperatureTrace {
  std::size_t node_count = 0;
  std::size_t round_count = 0;
  std::vector<double> values;  // row-major by node

  double at(std::size_t node, std::size_t round) const {
    if (node >= node_count || round >= round_count)
      throw DataError("trace has no entry for (node=" + std::to_string(node) +
                      ", round=" + std::to_string(round) + ")");
    return values[node * round_count + round];
  }
};

struct TemperatureProcess {
  TemperatureMode mode = TemperatureMode::synthetic;
  TemperatureC t_min{-10.0};
  TemperatureC t_max{53.0};
  double walk_sigma = 0.5;  // C per round
  std::optional<TemperatureTrace> trace;
};

inline void validate(const TemperatureProcess& p) {
  if (!std::isfinite(p.t_min.value) || !std::isfinite(p.t_max.value))
    throw ConfigError("temperature bounds must be finite");
  if (!(p.t_min < p.t_max))
    throw ConfigError("temperature.t_min must be < temperature.t_max");
  if (!(p.walk_sigma >= 0) || !std::isfinite(p.walk_sigma))
    throw ConfigError("temperature.walk_sigma must be >= 0");
  if (p.mode == TemperatureMode::trace && !p.trace)
    throw ConfigError("temperature.mode = trace requires a loaded trace");
}

/// Round-0 temperature of a node: uniform in [t_min, t_max] (synthetic) or
/// the trace's round-0 entry.
inline TemperatureC base_temperature(std::uint32_t node, const TemperatureProcess& proc,
                                     std::uint64_t seed) {
  if (proc.mode == TemperatureMode::trace) return {proc.trace->at(node, 0)};
  rng::Stream stream(seed, "base_temp", node);
  const double span = proc.t_max.value - proc.t_min.value;
  return {proc.t_min.value + stream.uniform() * span};
}

/// Incremental clamped Gaussian walk for one node. Step r produces the
/// temperature of round r; round 0 is the base temperature.
class TemperatureWalk {
 public:
  TemperatureWalk(std::uint32_t node, TemperatureC base, const TemperatureProcess& proc,
                  std::uint64_t seed)
      : node_(node), proc_(&proc), stream_(seed, "walk", node), current_(base.value) {}

  TemperatureC current() const { return {current_}; }

  TemperatureC advance() {
    ++round_;
    if (proc_->mode == TemperatureMode::trace) {
      current_ = proc_->trace->at(node_, round_);
    } else {
      current_ = std::clamp(current_ + proc_->walk_sigma * stream_.normal(),
                            proc_->t_min.value, proc_->t_max.value);
    }
    return {current_};
  }

 private:
  std::uint32_t node_;
  const TemperatureProcess* proc_;
  rng::Stream stream_;
  double current_;
  std::size_t round_ = 0;
};

/// Temperature of `node` in `round`. Pure in (seed, node id, round); the
/// synthetic walk is replayed from round 0.
inline TemperatureC temperature_at(const NodeState& node, std::size_t round,
                                   const TemperatureProcess& proc, std::uint64_t seed) {
  if (proc.mode == TemperatureMode::trace) return {proc.trace->at(node.id, round)};
  TemperatureWalk walk(node.id, node.base_temp, proc, seed);
  for (std::size_t r = 0; r < round; ++r) walk.advance();
  return walk.current();
}

// ---------------------------------------------------------------------------
// Trace ingestion

struct TraceBounds {
  std::size_t node_count = 0;
  std::size_t round_count = 0;
  TemperatureC t_min{-10.0};
  TemperatureC t_max{53.0};
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses a `node,round,temp_c` table and checks it covers every
/// (node, round) pair of the configured counts exactly once.
inline TemperatureTrace parse_temperature_trace(std::istream& in, const TraceBounds& bounds) {
  TemperatureTrace trace;
  trace.node_count = bounds.node_count;
  trace.round_count = bounds.round_count;
  const std::size_t cells = bounds.node_count * bounds.round_count;
  trace.values.assign(cells, 0.0);
  std::vector<bool> seen(cells, false);

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto where = "trace row " + std::to_string(line_no) + ": ";
    const auto fields = detail::split(text, ',');
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "node" || fields[1] != "round" ||
          fields[2] != "temp_c")
        throw DataError(where + "expected header 'node,round,temp_c'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) throw DataError(where + "expected 3 fields");
    const auto node = detail::parse_number<std::size_t>(fields[0]);
    const auto round = detail::parse_number<std::size_t>(fields[1]);
    const auto temp = detail::parse_number<double>(fields[2]);
    if (!node || !round || !temp || !std::isfinite(*temp))
      throw DataError(where + "malformed value");
    if (*node >= bounds.node_count || *round >= bounds.round_count)
      throw DataError(where + "(node=" + std::to_string(*node) + ", round=" +
                      std::to_string(*round) + ") outside configured counts");
    if (*temp < bounds.t_min.value || *temp > bounds.t_max.value)
      throw DataError(where + "temperature " + std::string(fields[2]) +
                      " outside declared range");
    const std::size_t cell = *node * bounds.round_count + *round;
    if (seen[cell])
      throw DataError(where + "duplicate entry (node=" + std::to_string(*node) +
                      ", round=" + std::to_string(*round) + ")");
    seen[cell] = true;
    trace.values[cell] = *temp;
  }
  if (!header_seen) throw DataError("trace: missing header 'node,round,temp_c'");
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!seen[cell])
      throw DataError("trace: missing entry (node=" +
                      std::to_string(cell / bounds.round_count) +
                      ", round=" + std::to_string(cell % bounds.round_count) + ")");
  }
  return trace;
}

inline TemperatureProcess load_temperature_trace(const std::filesystem::path& path,
                                                 const TraceBounds& bounds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open temperature trace " + path.string());
  TemperatureProcess proc;
  proc.mode = TemperatureMode::trace;
  proc.t_min = bounds.t_min;
  proc.t_max = bounds.t_max;
  proc.walk_sigma = 0.0;
  proc.trace = parse_temperature_trace(in, bounds);
  return proc;
}

}  // namespace east
