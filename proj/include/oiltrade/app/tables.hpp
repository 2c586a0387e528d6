#pragma once

// Comma-delimited output tables. Every table has a fixed header; numbers use
// the shortest round-trip decimal form so reruns are byte-identical.

#include <ostream>
#include <string>
#include <string_view>

#include "oiltrade/efficiency.hpp"
#include "oiltrade/ingest.hpp"
#include "oiltrade/ranking.hpp"
#include "oiltrade/resilience.hpp"
#include "oiltrade/simulation.hpp"

namespace oiltrade::app {

inline constexpr std::string_view kStatsHeader = "year,N,N_E,W,density";
inline constexpr std::string_view kEfficiencyHeader = "year,N,N_E,mean_weight,E,E_W";
inline constexpr std::string_view kNodeRankingHeader = "rank,code,score";
inline constexpr std::string_view kEdgeRankingHeader = "rank,source,target,score";
inline constexpr std::string_view kNodeImpactHeader = "rank,code,impact";
inline constexpr std::string_view kEdgeImpactHeader = "rank,source,target,impact";
inline constexpr std::string_view kTrajectoryHeader = "run_id,year,indicator,target_kind,t,phase,NE,NE_std";
inline constexpr std::string_view kReportHeader = "year,indicator,target_kind,R,LONE_DS,LONE_RS,Resilience,NE0";

inline std::string num(double v) { return format_double(v); }

inline void write_stats_row(std::ostream& out, int year, const TradeNetwork& net) {
  auto s = stats(net);
  out << year << ',' << s.active_nodes << ',' << s.active_edges << ',' << num(s.total_volume) << ','
      << num(s.density) << '\n';
}

inline void write_efficiency_row(std::ostream& out, int year, const TradeNetwork& net) {
  auto s = stats(net);
  auto e = network_efficiency(net);
  out << year << ',' << s.active_nodes << ',' << s.active_edges << ',' << num(s.mean_edge_weight.value_or(0.0))
      << ',' << num(e.raw_efficiency) << ',' << num(e.normalized_efficiency) << '\n';
}

inline void write_ranking(std::ostream& out, const TradeNetwork& net, const InfluenceRanking& r, std::size_t top) {
  const auto& g = net.graph();
  out << (r.kind == ElementKind::node ? kNodeRankingHeader : kEdgeRankingHeader) << '\n';
  for (std::size_t k = 0; k < r.items.size() && k < top; ++k) {
    out << k + 1 << ',';
    if (r.kind == ElementKind::node) {
      out << g.code(r.items[k]);
    } else {
      const auto& e = g.edge(r.items[k]);
      out << g.code(e.source) << ',' << g.code(e.target);
    }
    out << ',' << num(r.scores[k]) << '\n';
  }
}

inline void write_impacts(std::ostream& out, const TradeNetwork& net, ElementKind kind,
                          const std::vector<ImpactEntry>& entries) {
  const auto& g = net.graph();
  out << (kind == ElementKind::node ? kNodeImpactHeader : kEdgeImpactHeader) << '\n';
  for (std::size_t k = 0; k < entries.size(); ++k) {
    out << k + 1 << ',';
    if (kind == ElementKind::node) {
      out << g.code(entries[k].element.index);
    } else {
      const auto& e = g.edge(entries[k].element.index);
      out << g.code(e.source) << ',' << g.code(e.target);
    }
    out << ',' << num(entries[k].impact) << '\n';
  }
}

struct ScenarioKey {
  std::string run_id;
  int year = 0;
  IndicatorKind indicator = IndicatorKind::out_degree;
  ElementKind target = ElementKind::node;
};

inline void write_trajectory(std::ostream& out, const ScenarioKey& key, const Trajectory& traj,
                             const std::vector<double>* stddev) {
  out << kTrajectoryHeader << '\n';
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const auto& s = traj.steps[t];
    out << key.run_id << ',' << key.year << ',' << to_string(key.indicator) << ',' << to_string(key.target) << ','
        << s.t << ',' << to_string(s.phase) << ',' << num(s.ne) << ',' << num(stddev ? (*stddev)[t] : 0.0) << '\n';
  }
}

inline void write_report_row(std::ostream& out, const ScenarioKey& key, const ResilienceReport& rep) {
  out << key.year << ',' << to_string(key.indicator) << ',' << to_string(key.target) << ',' << num(rep.r) << ','
      << num(rep.lone_ds) << ',' << num(rep.lone_rs) << ',' << num(rep.resilience) << ',' << num(rep.ne0) << '\n';
}

}  // namespace oiltrade::app
