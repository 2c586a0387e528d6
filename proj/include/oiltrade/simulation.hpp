#pragma once

// Extreme-event shock-recovery protocol and single-element impact scans.
//
// A scenario ranks elements once on the starting network, masks them in
// batches of ceil(batch_fraction * M) until ceil(shock_depth * M) are gone,
// then restores them batch by batch. NE(t) = E(t) / <w>_0, where <w>_0 is
// the mean edge weight of the starting network, is sampled after every batch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oiltrade/efficiency.hpp"
#include "oiltrade/error.hpp"
#include "oiltrade/ranking.hpp"
#include "oiltrade/resilience.hpp"

namespace oiltrade {

enum class RecoveryOrder { shock_order, reverse_shock_order };

inline std::string_view to_string(RecoveryOrder o) {
  return o == RecoveryOrder::shock_order ? "shock_order" : "reverse_shock_order";
}

inline RecoveryOrder parse_recovery_order(std::string_view name) {
  if (name == "shock_order") return RecoveryOrder::shock_order;
  if (name == "reverse_shock_order") return RecoveryOrder::reverse_shock_order;
  throw ValidationError("unknown recovery order '" + std::string(name) + "'");
}

struct ScenarioConfig {
  ElementKind target_kind = ElementKind::node;
  IndicatorKind indicator = IndicatorKind::out_degree;
  double batch_fraction = 0.01;
  double shock_depth = 0.5;
  RecoveryOrder recovery_order = RecoveryOrder::shock_order;
  int replicates = 20;
  std::uint64_t master_seed = 0;
  // Re-rank the surviving elements before every shock batch.
  bool recompute_rankings = false;

  void validate() const {
    if (!(batch_fraction > 0.0) || !(batch_fraction <= shock_depth) || !(shock_depth <= 1.0)) {
      throw ValidationError("scenario needs 0 < batch_fraction <= shock_depth <= 1");
    }
    if (replicates < 1) throw ValidationError("replicates must be at least 1");
    if (target_kind == ElementKind::node && indicator == IndicatorKind::edge_weight) {
      throw ValidationError("edge_weight cannot target economies");
    }
  }
};

// ceil(fraction * count), ignoring floating noise below 1e-9.
inline std::size_t fraction_count(double fraction, std::size_t count) {
  double v = fraction * static_cast<double>(count);
  double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) v = r;
  return static_cast<std::size_t>(std::ceil(v));
}

// Seed of replicate `replicate` under `master`.
inline std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct ShockPlan {
  std::size_t population = 0;  // M
  std::size_t batch = 0;
  std::size_t total = 0;
  std::size_t shock_steps = 0;
};

inline ShockPlan plan_shock(const TradeNetwork& net, const ScenarioConfig& config) {
  ShockPlan p;
  p.population = config.target_kind == ElementKind::node ? net.active_node_count() : net.active_edge_count();
  p.batch = std::max<std::size_t>(1, fraction_count(config.batch_fraction, p.population));
  p.total = std::min(p.population, fraction_count(config.shock_depth, p.population));
  if (p.total < 1) throw ValidationError("shock depth selects no element to shock");
  p.shock_steps = (p.total + p.batch - 1) / p.batch;
  return p;
}

namespace detail {

inline void mask(TradeNetwork& net, ElementKind kind, std::span<const Element> batch) {
  std::vector<std::uint32_t> ids;
  ids.reserve(batch.size());
  for (const auto& el : batch) ids.push_back(el.index);
  if (kind == ElementKind::node) {
    net.shock_nodes(ids);
  } else {
    net.shock_edges(ids);
  }
}

inline double baseline_reference(const TradeNetwork& net) {
  if (net.node_count() < 2) throw ValidationError("simulation needs at least two economies");
  auto mean = stats(net).mean_edge_weight;
  if (!mean) throw ValidationError("simulation needs at least one active trade relationship");
  return *mean;
}

}  // namespace detail

// One shock-recovery run. `seed` feeds the random and module-based
// indicators.
inline Trajectory run_shock_recovery(const TradeNetwork& net, const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const double reference = detail::baseline_reference(net);
  const auto plan = plan_shock(net, config);

  TradeNetwork state = net;
  EfficiencyEvaluator eval;
  auto sample = [&] { return eval.raw(state) / reference; };

  Trajectory traj;
  traj.steps.push_back({0, sample(), Phase::baseline, {}});

  std::vector<Element> shocked;
  shocked.reserve(plan.total);
  InfluenceRanking ranking;
  std::size_t cursor = 0;
  if (!config.recompute_rankings) ranking = rank(state, config.target_kind, config.indicator, seed);

  while (shocked.size() < plan.total) {
    std::size_t take = std::min(plan.batch, plan.total - shocked.size());
    if (config.recompute_rankings) {
      ranking = rank(state, config.target_kind, config.indicator, seed + shocked.size());
      cursor = 0;
    }
    std::vector<Element> batch;
    for (; batch.size() < take && cursor < ranking.items.size(); ++cursor) {
      Element el{config.target_kind, ranking.items[cursor]};
      if (state.active(el)) batch.push_back(el);
    }
    if (batch.empty()) break;
    detail::mask(state, config.target_kind, batch);
    shocked.insert(shocked.end(), batch.begin(), batch.end());
    traj.steps.push_back({traj.steps.size(), sample(), Phase::shock, std::move(batch)});
  }
  traj.t0 = 0;
  traj.td = 0;
  traj.tr = traj.steps.size() - 1;

  std::vector<Element> order = shocked;
  if (config.recovery_order == RecoveryOrder::reverse_shock_order) std::reverse(order.begin(), order.end());
  for (std::size_t k = 0; k < order.size(); k += plan.batch) {
    auto end = std::min(order.size(), k + plan.batch);
    std::vector<Element> batch(order.begin() + static_cast<std::ptrdiff_t>(k),
                               order.begin() + static_cast<std::ptrdiff_t>(end));
    state.restore(batch);
    traj.steps.push_back({traj.steps.size(), sample(), Phase::recovery, std::move(batch)});
  }
  traj.trs = traj.steps.size() - 1;

  const double ne0 = traj.ne0();
  const double ners = traj.steps.back().ne;
  if (std::abs(ners - ne0) > 1e-12 * std::max(1.0, std::abs(ne0))) {
    throw StateError("full restoration did not return NE to its baseline value");
  }
  return traj;
}

inline Trajectory run_shock_recovery(const TradeNetwork& net, const ScenarioConfig& config) {
  return run_shock_recovery(net, config, config.master_seed);
}

struct RandomControl {
  Trajectory mean;            // NE column holds the replicate mean
  std::vector<double> stddev; // sample standard deviation per step
  std::vector<Trajectory> replicates;
};

// Random-order control group: `config.replicates` runs with the random
// indicator, replicate r seeded by replicate_seed(master_seed, r).
inline RandomControl run_random_control(const TradeNetwork& net, ScenarioConfig config) {
  if (config.replicates < 2) throw ValidationError("random control needs at least two replicates");
  config.indicator = IndicatorKind::random;
  RandomControl out;
  out.replicates.reserve(static_cast<std::size_t>(config.replicates));
  for (int r = 0; r < config.replicates; ++r) {
    out.replicates.push_back(
        run_shock_recovery(net, config, replicate_seed(config.master_seed, static_cast<std::uint64_t>(r))));
  }

  const auto& first = out.replicates.front();
  out.mean = first;
  const auto steps = first.steps.size();
  const auto count = static_cast<long double>(out.replicates.size());
  out.stddev.assign(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    long double sum = 0.0L;
    for (const auto& rep : out.replicates) sum += rep.steps.at(t).ne;
    const long double mean = sum / count;
    long double sq = 0.0L;
    for (const auto& rep : out.replicates) {
      long double d = rep.steps[t].ne - mean;
      sq += d * d;
    }
    out.mean.steps[t].ne = static_cast<double>(mean);
    out.mean.steps[t].batch.clear();
    out.stddev[t] = static_cast<double>(std::sqrt(sq / (count - 1.0L)));
  }
  return out;
}

// Efficiency drop caused by masking single elements of a fixed network.
// Caches the baseline row sums and, for edge scans, each source's
// shortest-path DAG: removing an edge outside it leaves that source's
// distances bit-identical, so only affected rows are recomputed.
class ImpactScanner {
 public:
  explicit ImpactScanner(const TradeNetwork& net)
      : net_(net), reference_(detail::baseline_reference(net)) {
    const auto n = net_.node_count();
    rows_.assign(n, 0.0);
    for (NodeIndex i = 0; i < n; ++i) {
      if (net_.node_active(i)) rows_[i] = eval_.row_sum(net_, i);
    }
    baseline_ = normalize(rows_);
  }

  [[nodiscard]] double baseline_ne() const { return baseline_; }
  [[nodiscard]] double reference() const { return reference_; }

  double impact(Element el) {
    if (!net_.active(el)) throw StateError("impact of an element that is not active");
    if (el.kind == ElementKind::edge) return edge_impact(el.index);
    TradeNetwork probe = net_;
    const NodeIndex id = el.index;
    probe.shock_nodes(std::span<const NodeIndex>(&id, 1));
    return baseline_ - eval_.raw(probe) / reference_;
  }

 private:
  double normalize(const std::vector<double>& rows) const {
    const auto n = static_cast<double>(net_.node_count());
    if (net_.node_count() < 2) return 0.0;
    double total = 0.0;
    for (double r : rows) total += r;
    return total / (n * (n - 1.0)) / reference_;
  }

  void build_trees() {
    const auto n = net_.node_count();
    const auto& g = net_.graph();
    tree_edges_.assign(n, {});
    ShortestPaths paths(n);
    for (NodeIndex i = 0; i < n; ++i) {
      if (!net_.node_active(i)) continue;
      paths.run(net_, i, Direction::out);
      auto dist = paths.distances();
      // Every in-edge of v that attains dist[v].
      for (NodeIndex v = 0; v < n; ++v) {
        if (v == i || dist[v] == kUnreachable) continue;
        for (auto e : g.in_edges(v)) {
          if (!net_.edge_active(e)) continue;
          auto u = g.edge(e).source;
          if (dist[u] != kUnreachable && dist[u] + g.length(e) == dist[v]) tree_edges_[i].push_back(e);
        }
      }
      std::sort(tree_edges_[i].begin(), tree_edges_[i].end());
    }
    trees_built_ = true;
  }

  double edge_impact(EdgeIndex e) {
    if (!trees_built_) build_trees();
    TradeNetwork probe = net_;
    probe.shock_edges(std::span<const EdgeIndex>(&e, 1));
    auto rows = rows_;
    for (NodeIndex i = 0; i < rows.size(); ++i) {
      const auto& t = tree_edges_[i];
      if (std::binary_search(t.begin(), t.end(), e)) rows[i] = eval_.row_sum(probe, i);
    }
    return baseline_ - normalize(rows);
  }

  const TradeNetwork& net_;
  double reference_;
  double baseline_ = 0.0;
  EfficiencyEvaluator eval_;
  std::vector<double> rows_;
  // Per source: every active edge lying on some shortest path from it.
  std::vector<std::vector<EdgeIndex>> tree_edges_;
  bool trees_built_ = false;
};

// NE(baseline) - NE(with `element` masked); the network is not modified.
inline double single_element_impact(const TradeNetwork& net, Element element) {
  ImpactScanner scanner(net);
  return scanner.impact(element);
}

struct ImpactEntry {
  Element element;
  double impact = 0.0;
};

// Exact impact of every active element of one kind, best first, cut to
// `top_k`. Ties fall back to the ranking tie-break rule.
inline std::vector<ImpactEntry> rank_by_impact(const TradeNetwork& net, ElementKind kind, std::size_t top_k) {
  if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");
  ImpactScanner scanner(net);
  std::vector<ImpactEntry> out;
  if (kind == ElementKind::node) {
    for (NodeIndex i = 0; i < net.node_count(); ++i) {
      if (net.node_active(i)) out.push_back({Element::node(i), scanner.impact(Element::node(i))});
    }
  } else {
    for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
      if (net.edge_active(e)) out.push_back({Element::edge(e), scanner.impact(Element::edge(e))});
    }
  }
  const auto& g = net.graph();
  auto tie = total_strength(net);
  std::stable_sort(out.begin(), out.end(), [&](const ImpactEntry& a, const ImpactEntry& b) {
    if (a.impact != b.impact) return a.impact > b.impact;
    if (kind == ElementKind::node) {
      auto x = a.element.index, y = b.element.index;
      if (tie[x] != tie[y]) return tie[x] > tie[y];
      return g.code(x) < g.code(y);
    }
    const auto& ea = g.edge(a.element.index);
    const auto& eb = g.edge(b.element.index);
    if (ea.weight != eb.weight) return ea.weight > eb.weight;
    if (ea.source != eb.source) return g.code(ea.source) < g.code(eb.source);
    return g.code(ea.target) < g.code(eb.target);
  });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

}  // namespace oiltrade
