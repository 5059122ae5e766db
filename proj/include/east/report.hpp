#pragma once

// CSV emission and the text rendering of summary.csv. All real numbers are
// written with six fixed decimals so reruns can be compared byte for byte.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "east/engine.hpp"
#include "east/error.hpp"
#include "east/metrics.hpp"

namespace east::report {

inline constexpr std::string_view kRoundsHeader =
    "round,controller,beacons,acks,tx_energy_j,rx_energy_j,alive,alive_A,alive_B,alive_C,"
    "prr_A,prr_B,prr_C";
inline constexpr std::string_view kNodesHeader =
    "node,x_m,y_m,region,final_temp_c,final_loss_dbm,final_level_dbm,final_pt_dbm,battery_j,"
    "alive";
inline constexpr std::string_view kSummaryHeader =
    "region,initial_count,desired,survivors,threshold_level_dbm,nodes_above_threshold,"
    "nodes_below_threshold,prr_min_pct,prr_max_pct,threshold_loss_dbm";

inline constexpr std::string_view kToolVersion = "1.0.0";

inline std::string num(double v) { return fmt::format("{:.6f}", v); }

inline std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : ""; }

inline std::string region_name(const std::optional<RegionId>& r) {
  return r ? std::string(name(*r)) : "-";
}

inline std::string rounds_csv(const std::vector<RoundRecord>& records) {
  std::string out{kRoundsHeader};
  out += '\n';
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.round,
                       to_string(r.controller), r.traffic.beacons_sent, r.traffic.acks_sent,
                       num(r.tx_energy_j), num(r.rx_energy_j), r.alive, r.alive_by_region[0],
                       r.alive_by_region[1], r.alive_by_region[2], opt_num(r.prr_by_region[0]),
                       opt_num(r.prr_by_region[1]), opt_num(r.prr_by_region[2]));
  }
  return out;
}

inline std::string nodes_csv(const std::vector<NodeState>& nodes) {
  std::string out{kNodesHeader};
  out += '\n';
  for (const auto& n : nodes) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", n.id, num(n.pos.x), num(n.pos.y),
                       region_name(n.region), num(n.current_temp.value),
                       num(rssi_loss_from_temperature(n.current_temp).value),
                       num(n.assigned_level.value), num(n.assigned_pt.value), num(n.battery_j),
                       n.alive ? 1 : 0);
  }
  return out;
}

inline std::string summary_csv(const std::vector<RegionSummary>& rows) {
  std::string out{kSummaryHeader};
  out += '\n';
  for (const auto& s : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", name(s.region), s.initial_count,
                       s.desired, s.survivors, num(s.threshold_level.value),
                       s.nodes_above_threshold, s.nodes_below_threshold, num(s.prr_min_pct),
                       num(s.prr_max_pct), num(s.threshold_loss.value));
  }
  return out;
}

inline std::string compare_csv(const ComparisonReport& rep) {
  std::string out = "metric,east,classical,delta\n";
  out += fmt::format("control_packets,{},{},{}\n", rep.east.control_packets,
                     rep.classical.control_packets, num(rep.deltas.control_packets));
  out += fmt::format("energy_j,{},{},{}\n", num(rep.east.energy_j), num(rep.classical.energy_j),
                     num(rep.deltas.energy_j));
  out += fmt::format("survivors,{},{},{}\n", rep.east.survivors, rep.classical.survivors,
                     num(rep.deltas.survivors));
  out += fmt::format("mean_prr,{},{},{}\n", num(rep.east.mean_prr), num(rep.classical.mean_prr),
                     num(rep.deltas.mean_prr));
  out += fmt::format("east_dominates,{},,\n", rep.east_dominates ? 1 : 0);
  return out;
}

inline std::string node_series_csv(std::string_view column, const std::vector<NodeValue>& s) {
  std::string out = fmt::format("node,{}\n", column);
  for (const auto& v : s) out += fmt::format("{},{}\n", v.node, num(v.value));
  return out;
}

inline std::string region_series_csv(const std::vector<RegionValue>& s) {
  std::string out = "region,node,level_dbm\n";
  for (const auto& v : s) out += fmt::format("{},{},{}\n", name(v.region), v.node, num(v.value));
  return out;
}

/// Relative path -> contents for the six figure files.
inline std::vector<std::pair<std::string, std::string>> figure_files(const FigureSeries& fig) {
  return {
      {"figures/fig1_temp_per_node.csv", node_series_csv("temp_c", fig.temp_per_node)},
      {"figures/fig2_loss_per_node.csv", node_series_csv("loss_dbm", fig.loss_per_node)},
      {"figures/fig3_level_per_node.csv", node_series_csv("level_dbm", fig.level_per_node)},
      {"figures/fig4_pt_per_node.csv", node_series_csv("pt_dbm", fig.pt_per_node)},
      {"figures/fig5_level_per_region_baseline.csv",
       region_series_csv(fig.level_per_region_baseline)},
      {"figures/fig6_level_per_region_east.csv", region_series_csv(fig.level_per_region_east)},
  };
}

inline void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                        ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses `key = value` lines (the manifest format).
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[std::string(detail::trim(std::string_view(line).substr(0, eq)))] =
        std::string(detail::trim(std::string_view(line).substr(eq + 1)));
  }
  return out;
}

inline std::string manifest_text(const std::vector<std::pair<std::string, std::string>>& fields,
                                 const std::vector<std::string>& files) {
  std::string out;
  for (const auto& [k, v] : fields) out += fmt::format("{} = {}\n", k, v);
  std::string list;
  for (const auto& f : files) list += (list.empty() ? "" : ",") + f;
  out += fmt::format("files = {}\n", list);
  return out;
}

/// Renders summary.csv as an aligned table with one row per reported
/// quantity and the regions as comma-joined columns.
inline std::string render_summary_table(std::string_view summary_csv_text,
                                        std::string_view rounds_label) {
  std::istringstream in{std::string(summary_csv_text)};
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader)
    throw DataError("summary.csv: unexpected header");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    for (auto f : detail::split(line, ',')) cells.emplace_back(f);
    if (cells.size() != 10) throw DataError("summary.csv: expected 10 columns");
    rows.push_back(std::move(cells));
  }
  if (rows.size() != 3) throw DataError("summary.csv: expected rows for regions A, B, C");

  auto join = [&](std::size_t col, auto&& fmt_cell) {
    std::string s;
    for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? "," : "") + fmt_cell(rows[i][col]);
    return s;
  };
  auto plain = [](const std::string& c) { return c; };
  auto two_dp = [](const std::string& c) {
    const auto v = detail::parse_number<double>(c);
    if (!v) throw DataError("summary.csv: malformed number '" + c + "'");
    return fmt::format("{:.2f}", *v);
  };
  auto whole = [](const std::string& c) {
    const auto v = detail::parse_number<double>(c);
    if (!v) throw DataError("summary.csv: malformed number '" + c + "'");
    return fmt::format("{:.0f}", *v);
  };
  std::string prr;
  for (std::size_t i = 0; i < rows.size(); ++i)
    prr += (i ? "," : "") + fmt::format("({}-{})", whole(rows[i][7]), whole(rows[i][8]));

  const std::vector<std::pair<std::string, std::string>> table = {
      {"Number of Nodes (A,B,C)", join(1, plain)},
      {"Desired Neighbors (A,B,C)", join(2, plain)},
      {fmt::format("Nodes after {} Rounds (A,B,C)", rounds_label), join(3, plain)},
      {"Threshold power level (A,B,C)", join(4, two_dp) + " dBm"},
      {"Nodes above threshold RSSI_loss (A,B,C)", join(5, plain)},
      {"Nodes below threshold RSSI_loss (A,B,C)", join(6, plain)},
      {"PRR (A,B,C)", prr + " %"},
      {"Threshold RSSI_loss (A,B,C)", join(9, two_dp) + " dBm"},
  };
  std::size_t width = 0;
  for (const auto& [label, _] : table) width = std::max(width, label.size());
  std::string out;
  for (const auto& [label, value] : table) out += fmt::format("{:<{}} | {}\n", label, width, value);
  return out;
}

}  // namespace east::report
