#pragma once

// Weighted network efficiency.
//
// Every edge has length 1/w, so heavy trade routes are short. The efficiency
// of an ordered pair (i, j) is the reciprocal of the shortest i -> j length
// (0 when j is unreachable), and the network efficiency E is the mean over
// all N(N-1) ordered pairs of the baseline node set. Masked nodes stay in N
// and contribute zero-valued pairs. E^W = E / <w> makes years comparable.

#include <stdexcept>

#include "oiltrade/error.hpp"
#include "oiltrade/network.hpp"
#include "oiltrade/shortest_path.hpp"

namespace oiltrade {

struct EfficiencyResult {
  double raw_efficiency = 0.0;
  double normalized_efficiency = 0.0;
  double reference_mean_weight = 0.0;
  double pair_count = 0.0;
  // Set when N < 2 and the result is zero by definition.
  bool degenerate = false;
};

// Reusable evaluator; holds the shortest-path buffers so repeated calls in
// a simulation do not allocate.
class EfficiencyEvaluator {
 public:
  [[nodiscard]] double raw(const TradeNetwork& net) {
    const auto n = net.node_count();
    if (n < 2) return 0.0;
    double total = 0.0;
    for (NodeIndex i = 0; i < n; ++i) {
      if (!net.node_active(i)) continue;
      total += row_sum(net, i);
    }
    auto nd = static_cast<double>(n);
    return total / (nd * (nd - 1.0));
  }

  // Sum over j != i of E_ij, accumulated in ascending j.
  double row_sum(const TradeNetwork& net, NodeIndex i) {
    paths_.run(net, i, Direction::out);
    auto dist = paths_.distances();
    double row = 0.0;
    for (NodeIndex j = 0; j < dist.size(); ++j) {
      if (j == i || dist[j] == kUnreachable) continue;
      row += 1.0 / dist[j];
    }
    return row;
  }

  [[nodiscard]] double pair(const TradeNetwork& net, NodeIndex i, NodeIndex j) {
    if (i == j) throw std::invalid_argument("path efficiency needs two distinct economies");
    if (i >= net.node_count() || j >= net.node_count()) throw std::out_of_range("node index out of range");
    paths_.run(net, i, Direction::out);
    double d = paths_.distances()[j];
    return d == kUnreachable ? 0.0 : 1.0 / d;
  }

 private:
  ShortestPaths paths_;
};

inline double path_efficiency(const TradeNetwork& net, NodeIndex i, NodeIndex j) {
  EfficiencyEvaluator eval;
  return eval.pair(net, i, j);
}

// E^W = E / reference. The reference is the caller's choice; simulations
// freeze it at the baseline mean edge weight.
inline EfficiencyResult normalized_efficiency(const TradeNetwork& net, double reference_mean_weight) {
  if (!(reference_mean_weight > 0.0) || !std::isfinite(reference_mean_weight)) {
    throw std::invalid_argument("reference mean weight must be positive and finite");
  }
  EfficiencyEvaluator eval;
  EfficiencyResult r;
  const auto n = static_cast<double>(net.node_count());
  r.degenerate = net.node_count() < 2;
  r.pair_count = r.degenerate ? 0.0 : n * (n - 1.0);
  r.raw_efficiency = eval.raw(net);
  r.reference_mean_weight = reference_mean_weight;
  r.normalized_efficiency = r.raw_efficiency / reference_mean_weight;
  return r;
}

// E, normalized by the network's own current mean edge weight (0 when the
// network has no active edges).
inline EfficiencyResult network_efficiency(const TradeNetwork& net) {
  auto mean = stats(net).mean_edge_weight;
  if (mean) return normalized_efficiency(net, *mean);
  EfficiencyResult r;
  r.degenerate = net.node_count() < 2;
  const auto n = static_cast<double>(net.node_count());
  r.pair_count = r.degenerate ? 0.0 : n * (n - 1.0);
  return r;
}

}  // namespace oiltrade
