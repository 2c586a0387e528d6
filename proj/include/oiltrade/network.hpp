#pragma once

// Weighted directed trade graph with mask-based shocks.
//
// A TradeGraph is the immutable baseline of one year: economies are indexed
// by sorted code, edges point exporter -> importer and are sorted by
// (source, target). A TradeNetwork pairs a shared baseline with per-node and
// per-edge activity masks, so shocking and restoring never touch weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oiltrade/error.hpp"

namespace oiltrade {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

struct EconomyId {
  std::string code;
  NodeIndex index = 0;
};

struct TradeEdge {
  NodeIndex source = 0;
  NodeIndex target = 0;
  double weight = 0.0;
};

// One directed flow as it arrives from the outside world.
struct FlowRecord {
  std::string source;
  std::string target;
  double weight = 0.0;
};

enum class ElementKind { node, edge };

struct Element {
  ElementKind kind = ElementKind::node;
  std::uint32_t index = 0;

  static Element node(NodeIndex i) { return {ElementKind::node, i}; }
  static Element edge(EdgeIndex e) { return {ElementKind::edge, e}; }
  friend bool operator==(const Element&, const Element&) = default;
};

class TradeGraph {
 public:
  TradeGraph() = default;

  // `codes` must be strictly sorted; `edges` sorted by (source, target),
  // unique, loop-free and strictly positive.
  TradeGraph(std::vector<std::string> codes, std::vector<TradeEdge> edges)
      : codes_(std::move(codes)), edges_(std::move(edges)) {
    const auto n = codes_.size();
    index_.reserve(n);
    for (NodeIndex i = 0; i < n; ++i) index_.emplace(codes_[i], i);

    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    lengths_.reserve(edges_.size());
    for (const auto& e : edges_) {
      ++out_offsets_[e.source + 1];
      ++in_offsets_[e.target + 1];
      lengths_.push_back(1.0 / e.weight);
    }
    for (std::size_t i = 0; i < n; ++i) {
      out_offsets_[i + 1] += out_offsets_[i];
      in_offsets_[i + 1] += in_offsets_[i];
    }
    // Edges are already grouped by source, so the out-lists are the identity.
    in_edges_.resize(edges_.size());
    auto fill = in_offsets_;
    for (EdgeIndex e = 0; e < edges_.size(); ++e) {
      in_edges_[fill[edges_[e].target]++] = e;
    }
    out_edges_.resize(edges_.size());
    for (EdgeIndex e = 0; e < edges_.size(); ++e) out_edges_[e] = e;
  }

  [[nodiscard]] std::size_t node_count() const { return codes_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }

  [[nodiscard]] const std::string& code(NodeIndex i) const { return codes_.at(i); }
  [[nodiscard]] std::span<const std::string> codes() const { return codes_; }

  [[nodiscard]] std::optional<NodeIndex> find(std::string_view code) const {
    auto it = index_.find(std::string(code));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] const TradeEdge& edge(EdgeIndex e) const { return edges_.at(e); }
  [[nodiscard]] std::span<const TradeEdge> edges() const { return edges_; }

  // Shortest-path length of an edge: 1 / weight.
  [[nodiscard]] double length(EdgeIndex e) const { return lengths_[e]; }

  [[nodiscard]] std::span<const EdgeIndex> out_edges(NodeIndex i) const {
    return {out_edges_.data() + out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]};
  }
  [[nodiscard]] std::span<const EdgeIndex> in_edges(NodeIndex i) const {
    return {in_edges_.data() + in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]};
  }

  [[nodiscard]] std::optional<EdgeIndex> find_edge(NodeIndex source, NodeIndex target) const {
    auto out = out_edges(source);
    auto it = std::lower_bound(out.begin(), out.end(), target, [&](EdgeIndex e, NodeIndex t) {
      return edges_[e].target < t;
    });
    if (it == out.end() || edges_[*it].target != target) return std::nullopt;
    return *it;
  }

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<TradeEdge> edges_;
  std::vector<double> lengths_;
  std::vector<std::size_t> out_offsets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<EdgeIndex> out_edges_;
  std::vector<EdgeIndex> in_edges_;
};

struct NetworkStats {
  std::size_t active_nodes = 0;
  std::size_t active_edges = 0;
  double density = 0.0;
  double total_volume = 0.0;
  // Empty when there are no active edges.
  std::optional<double> mean_edge_weight;
};

class TradeNetwork {
 public:
  TradeNetwork() : TradeNetwork(0, std::make_shared<const TradeGraph>()) {}

  TradeNetwork(int year, std::shared_ptr<const TradeGraph> graph)
      : year_(year),
        graph_(std::move(graph)),
        node_active_(graph_->node_count(), 1),
        edge_masked_(graph_->edge_count(), 0),
        edge_active_(graph_->edge_count(), 1),
        active_edges_(graph_->edge_count()) {}

  [[nodiscard]] int year() const { return year_; }
  [[nodiscard]] const TradeGraph& graph() const { return *graph_; }
  [[nodiscard]] const std::shared_ptr<const TradeGraph>& shared_graph() const { return graph_; }

  // N stays at the baseline node count whatever the mask state.
  [[nodiscard]] std::size_t node_count() const { return graph_->node_count(); }
  [[nodiscard]] std::size_t edge_count() const { return graph_->edge_count(); }
  [[nodiscard]] std::size_t active_edge_count() const { return active_edges_; }
  [[nodiscard]] std::size_t active_node_count() const {
    return static_cast<std::size_t>(std::count(node_active_.begin(), node_active_.end(), 1));
  }

  [[nodiscard]] bool node_active(NodeIndex i) const { return node_active_[i] != 0; }
  [[nodiscard]] bool edge_active(EdgeIndex e) const { return edge_active_[e] != 0; }
  [[nodiscard]] bool active(Element el) const {
    return el.kind == ElementKind::node ? node_active(el.index) : edge_active(el.index);
  }

  // Weight of an active edge, 0 for a masked one (the matrix view).
  [[nodiscard]] double weight(EdgeIndex e) const {
    return edge_active_[e] ? graph_->edge(e).weight : 0.0;
  }

  [[nodiscard]] bool is_baseline() const {
    return std::all_of(node_active_.begin(), node_active_.end(), [](auto f) { return f == 1; }) &&
           std::all_of(edge_masked_.begin(), edge_masked_.end(), [](auto f) { return f == 0; });
  }

  // Fresh copy of this network with every mask cleared.
  [[nodiscard]] TradeNetwork baseline() const { return TradeNetwork(year_, graph_); }

  // Zero the rows and columns of `targets`. All-or-nothing: on error the
  // network is unchanged.
  void shock_nodes(std::span<const NodeIndex> targets) {
    check_nodes(targets, /*want_active=*/true, "shock");
    for (auto i : targets) {
      node_active_[i] = 0;
      for (auto e : graph_->out_edges(i)) deactivate(e);
      for (auto e : graph_->in_edges(i)) deactivate(e);
    }
  }

  void shock_edges(std::span<const EdgeIndex> targets) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      auto e = targets[k];
      if (e >= edge_count()) throw std::out_of_range("edge index out of range");
      if (!edge_active_[e]) throw StateError("edge " + describe_edge(e) + " is not active");
      for (std::size_t m = 0; m < k; ++m) {
        if (targets[m] == e) throw StateError("edge " + describe_edge(e) + " listed twice");
      }
    }
    for (auto e : targets) {
      edge_masked_[e] = 1;
      deactivate(e);
    }
  }

  // Reactivate elements in order at their baseline weights. A restored node
  // brings back an incident edge only once the other endpoint is active and
  // the edge itself is not individually masked.
  void restore(std::span<const Element> elements) {
    std::vector<NodeIndex> nodes;
    for (const auto& el : elements) {
      if (el.kind == ElementKind::node) {
        nodes.push_back(el.index);
      } else {
        if (el.index >= edge_count()) throw std::out_of_range("edge index out of range");
        if (!edge_masked_[el.index]) {
          throw StateError("edge " + describe_edge(el.index) + " is not shocked");
        }
      }
    }
    check_nodes(nodes, /*want_active=*/false, "restore");
    for (std::size_t k = 0; k < elements.size(); ++k) {
      for (std::size_t m = 0; m < k; ++m) {
        if (elements[m] == elements[k]) throw StateError("element listed twice in restore");
      }
    }
    for (const auto& el : elements) {
      if (el.kind == ElementKind::node) {
        node_active_[el.index] = 1;
        for (auto e : graph_->out_edges(el.index)) refresh(e);
        for (auto e : graph_->in_edges(el.index)) refresh(e);
      } else {
        edge_masked_[el.index] = 0;
        refresh(el.index);
      }
    }
  }

  // Every active edge has two active endpoints and the counter matches.
  [[nodiscard]] bool consistent() const {
    std::size_t count = 0;
    for (EdgeIndex e = 0; e < edge_count(); ++e) {
      const auto& edge = graph_->edge(e);
      bool expected = !edge_masked_[e] && node_active_[edge.source] && node_active_[edge.target];
      if (static_cast<bool>(edge_active_[e]) != expected) return false;
      count += edge_active_[e];
    }
    return count == active_edges_;
  }

 private:
  void deactivate(EdgeIndex e) {
    if (edge_active_[e]) {
      edge_active_[e] = 0;
      --active_edges_;
    }
  }

  void refresh(EdgeIndex e) {
    const auto& edge = graph_->edge(e);
    bool on = !edge_masked_[e] && node_active_[edge.source] && node_active_[edge.target];
    if (on && !edge_active_[e]) {
      edge_active_[e] = 1;
      ++active_edges_;
    }
  }

  void check_nodes(std::span<const NodeIndex> nodes, bool want_active, const char* verb) const {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      auto i = nodes[k];
      if (i >= node_count()) throw std::out_of_range("node index out of range");
      if (node_active(i) != want_active) {
        throw StateError(std::string("cannot ") + verb + " economy " + graph_->code(i) +
                         (want_active ? ": already shocked" : ": not shocked"));
      }
      for (std::size_t m = 0; m < k; ++m) {
        if (nodes[m] == i) throw StateError("economy " + graph_->code(i) + " listed twice");
      }
    }
  }

  [[nodiscard]] std::string describe_edge(EdgeIndex e) const {
    const auto& edge = graph_->edge(e);
    return graph_->code(edge.source) + "->" + graph_->code(edge.target);
  }

  int year_ = 0;
  std::shared_ptr<const TradeGraph> graph_;
  std::vector<std::uint8_t> node_active_;
  std::vector<std::uint8_t> edge_masked_;
  std::vector<std::uint8_t> edge_active_;
  std::size_t active_edges_ = 0;
};

// Aggregate flows into a network. Parallel flows are summed in ascending
// weight order so the result does not depend on record order; self-loops
// are dropped. Non-finite, zero or negative weights and empty codes raise
// ValidationError naming the record.
inline TradeNetwork build_network(std::span<const FlowRecord> records, int year = 0) {
  struct Keyed {
    const FlowRecord* rec;
    std::size_t position;
  };
  std::vector<Keyed> kept;
  std::vector<std::string> codes;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    auto where = [&] {
      return "record " + std::to_string(k + 1) + " (" + r.source + "->" + r.target + ")";
    };
    if (r.source.empty() || r.target.empty()) throw ValidationError(where() + ": empty economy code");
    if (!std::isfinite(r.weight)) throw ValidationError(where() + ": non-finite weight");
    if (r.weight <= 0.0) throw ValidationError(where() + ": weight must be positive");
    codes.push_back(r.source);
    codes.push_back(r.target);
    if (r.source != r.target) kept.push_back({&r, k});
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());

  auto index_of = [&](const std::string& c) {
    return static_cast<NodeIndex>(std::lower_bound(codes.begin(), codes.end(), c) - codes.begin());
  };
  struct Flow {
    NodeIndex s, t;
    double w;
  };
  std::vector<Flow> flows;
  flows.reserve(kept.size());
  for (const auto& k : kept) flows.push_back({index_of(k.rec->source), index_of(k.rec->target), k.rec->weight});
  std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
    if (a.s != b.s) return a.s < b.s;
    if (a.t != b.t) return a.t < b.t;
    return a.w < b.w;
  });

  std::vector<TradeEdge> edges;
  for (const auto& f : flows) {
    if (!edges.empty() && edges.back().source == f.s && edges.back().target == f.t) {
      edges.back().weight += f.w;
    } else {
      edges.push_back({f.s, f.t, f.w});
    }
  }
  return TradeNetwork(year, std::make_shared<const TradeGraph>(std::move(codes), std::move(edges)));
}

inline TradeNetwork build_network(std::initializer_list<FlowRecord> records, int year = 0) {
  std::vector<FlowRecord> v(records);
  return build_network(std::span<const FlowRecord>(v), year);
}

// Density, volume and mean edge weight over active nodes and edges.
inline NetworkStats stats(const TradeNetwork& net) {
  NetworkStats s;
  s.active_nodes = net.active_node_count();
  s.active_edges = net.active_edge_count();
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) s.total_volume += net.weight(e);
  if (s.active_nodes >= 2) {
    auto n = static_cast<double>(s.active_nodes);
    s.density = static_cast<double>(s.active_edges) / (n * (n - 1.0));
  }
  if (s.active_edges > 0) s.mean_edge_weight = s.total_volume / static_cast<double>(s.active_edges);
  return s;
}

// Same topology with every weight multiplied by `factor` (> 0).
inline TradeNetwork scaled(const TradeNetwork& net, double factor) {
  const auto& g = net.graph();
  std::vector<std::string> codes(g.codes().begin(), g.codes().end());
  std::vector<TradeEdge> edges(g.edges().begin(), g.edges().end());
  for (auto& e : edges) e.weight *= factor;
  return TradeNetwork(net.year(), std::make_shared<const TradeGraph>(std::move(codes), std::move(edges)));
}

// Active edges as flow records, in edge order.
inline std::vector<FlowRecord> to_flows(const TradeNetwork& net) {
  std::vector<FlowRecord> out;
  const auto& g = net.graph();
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (!net.edge_active(e)) continue;
    const auto& edge = g.edge(e);
    out.push_back({g.code(edge.source), g.code(edge.target), edge.weight});
  }
  return out;
}

}  // namespace oiltrade
