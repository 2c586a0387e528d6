#pragma once

// Influence indicators and the deterministic rankings that drive targeted
// shocks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "oiltrade/centrality.hpp"
#include "oiltrade/error.hpp"
#include "oiltrade/network.hpp"

namespace oiltrade {

enum class IndicatorKind {
  out_degree,
  in_degree,
  out_strength,
  in_strength,
  out_closeness,
  in_closeness,
  betweenness,
  pagerank,
  hubs,
  authorities,
  clustering,
  within_module,
  outside_module,
  participation,
  edge_weight,
  random,
};

inline constexpr std::array<std::pair<IndicatorKind, std::string_view>, 16> kIndicatorNames{{
    {IndicatorKind::out_degree, "out_degree"},
    {IndicatorKind::in_degree, "in_degree"},
    {IndicatorKind::out_strength, "out_strength"},
    {IndicatorKind::in_strength, "in_strength"},
    {IndicatorKind::out_closeness, "out_closeness"},
    {IndicatorKind::in_closeness, "in_closeness"},
    {IndicatorKind::betweenness, "betweenness"},
    {IndicatorKind::pagerank, "pagerank"},
    {IndicatorKind::hubs, "hubs"},
    {IndicatorKind::authorities, "authorities"},
    {IndicatorKind::clustering, "clustering"},
    {IndicatorKind::within_module, "within_module"},
    {IndicatorKind::outside_module, "outside_module"},
    {IndicatorKind::participation, "participation"},
    {IndicatorKind::edge_weight, "edge_weight"},
    {IndicatorKind::random, "random"},
}};

inline std::string_view to_string(IndicatorKind k) {
  for (auto [kind, name] : kIndicatorNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

inline IndicatorKind parse_indicator(std::string_view name) {
  for (auto [kind, n] : kIndicatorNames) {
    if (n == name) return kind;
  }
  throw ValidationError("unknown indicator '" + std::string(name) + "'");
}

inline std::string_view to_string(ElementKind k) { return k == ElementKind::node ? "nodes" : "edges"; }

inline ElementKind parse_element_kind(std::string_view name) {
  if (name == "nodes" || name == "node") return ElementKind::node;
  if (name == "edges" || name == "edge") return ElementKind::edge;
  throw ValidationError("unknown target kind '" + std::string(name) + "' (expected nodes or edges)");
}

struct InfluenceRanking {
  IndicatorKind indicator = IndicatorKind::out_degree;
  ElementKind kind = ElementKind::node;
  std::vector<std::uint32_t> items;  // best first
  std::vector<double> scores;        // aligned with items
  std::optional<std::uint64_t> seed;
};

// Per-node score of a node indicator. `seed` drives community detection for
// the module-based indicators.
inline Scores node_scores(const TradeNetwork& net, IndicatorKind kind, std::uint64_t seed = 0) {
  switch (kind) {
    case IndicatorKind::out_degree: return degree(net, Direction::out);
    case IndicatorKind::in_degree: return degree(net, Direction::in);
    case IndicatorKind::out_strength: return strength(net, Direction::out);
    case IndicatorKind::in_strength: return strength(net, Direction::in);
    case IndicatorKind::out_closeness: return closeness(net, Direction::out);
    case IndicatorKind::in_closeness: return closeness(net, Direction::in);
    case IndicatorKind::betweenness: return betweenness(net);
    case IndicatorKind::pagerank: return pagerank(net).scores;
    case IndicatorKind::hubs: return hits(net).hubs;
    case IndicatorKind::authorities: return hits(net).authorities;
    case IndicatorKind::clustering: return clustering(net);
    case IndicatorKind::within_module:
      return module_indicators(net, detect_communities(net, seed)).within_module;
    case IndicatorKind::outside_module:
      return module_indicators(net, detect_communities(net, seed)).outside_module;
    case IndicatorKind::participation:
      return module_indicators(net, detect_communities(net, seed)).participation;
    case IndicatorKind::edge_weight:
      throw ValidationError("edge_weight ranks trade relationships, not economies");
    case IndicatorKind::random:
      break;
  }
  throw ValidationError("random has no scores; use rank_nodes with a seed");
}

namespace detail {

template <class T>
std::vector<T> seeded_shuffle(std::vector<T> items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(items.begin(), items.end(), rng);
  return items;
}

inline void fill_position_scores(InfluenceRanking& r) {
  const auto m = r.items.size();
  r.scores.resize(m);
  for (std::size_t k = 0; k < m; ++k) r.scores[k] = static_cast<double>(m - k);
}

}  // namespace detail

// Active economies ordered by descending score; ties fall to total strength
// (descending) and then to the economy code.
inline InfluenceRanking rank_nodes(const TradeNetwork& net, IndicatorKind kind, std::uint64_t seed = 0) {
  InfluenceRanking r;
  r.indicator = kind;
  r.kind = ElementKind::node;
  std::vector<std::uint32_t> active;
  for (NodeIndex i = 0; i < net.node_count(); ++i) {
    if (net.node_active(i)) active.push_back(i);
  }
  if (kind == IndicatorKind::random) {
    r.seed = seed;
    r.items = detail::seeded_shuffle(std::move(active), seed);
    detail::fill_position_scores(r);
    return r;
  }
  auto score = node_scores(net, kind, seed);
  if (kind == IndicatorKind::within_module || kind == IndicatorKind::outside_module ||
      kind == IndicatorKind::participation) {
    r.seed = seed;
  }
  auto tie = total_strength(net);
  const auto& g = net.graph();
  std::sort(active.begin(), active.end(), [&](NodeIndex a, NodeIndex b) {
    if (score[a] != score[b]) return score[a] > score[b];
    if (tie[a] != tie[b]) return tie[a] > tie[b];
    return g.code(a) < g.code(b);
  });
  r.items = std::move(active);
  for (auto i : r.items) r.scores.push_back(score[i]);
  return r;
}

// Active trade relationships. edge_weight orders by weight with ties by
// (source code, target code). A node indicator scores an edge by the sum of
// its endpoint scores, with ties by weight and then codes. random shuffles.
inline InfluenceRanking rank_edges(const TradeNetwork& net, IndicatorKind kind = IndicatorKind::edge_weight,
                                   std::uint64_t seed = 0) {
  InfluenceRanking r;
  r.indicator = kind;
  r.kind = ElementKind::edge;
  const auto& g = net.graph();
  std::vector<std::uint32_t> active;
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (net.edge_active(e)) active.push_back(e);
  }
  if (kind == IndicatorKind::random) {
    r.seed = seed;
    r.items = detail::seeded_shuffle(std::move(active), seed);
    detail::fill_position_scores(r);
    return r;
  }

  std::vector<double> score(net.edge_count(), 0.0);
  if (kind == IndicatorKind::edge_weight) {
    for (auto e : active) score[e] = g.edge(e).weight;
  } else {
    auto ns = node_scores(net, kind, seed);
    for (auto e : active) score[e] = ns[g.edge(e).source] + ns[g.edge(e).target];
    if (kind == IndicatorKind::within_module || kind == IndicatorKind::outside_module ||
        kind == IndicatorKind::participation) {
      r.seed = seed;
    }
  }
  std::sort(active.begin(), active.end(), [&](EdgeIndex a, EdgeIndex b) {
    if (score[a] != score[b]) return score[a] > score[b];
    const auto& ea = g.edge(a);
    const auto& eb = g.edge(b);
    if (ea.weight != eb.weight) return ea.weight > eb.weight;
    if (ea.source != eb.source) return g.code(ea.source) < g.code(eb.source);
    return g.code(ea.target) < g.code(eb.target);
  });
  r.items = std::move(active);
  for (auto e : r.items) r.scores.push_back(score[e]);
  return r;
}

inline InfluenceRanking rank(const TradeNetwork& net, ElementKind target, IndicatorKind kind,
                             std::uint64_t seed = 0) {
  return target == ElementKind::node ? rank_nodes(net, kind, seed) : rank_edges(net, kind, seed);
}

}  // namespace oiltrade
