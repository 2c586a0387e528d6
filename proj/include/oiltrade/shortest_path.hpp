#pragma once

// Single-source shortest paths over the active edges of a TradeNetwork,
// with edge length 1/w. The workspace keeps its buffers between runs; the
// efficiency and centrality loops call run() once per source.

#include <algorithm>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "oiltrade/network.hpp"

namespace oiltrade {

enum class Direction { out, in };

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

class ShortestPaths {
 public:
  ShortestPaths() = default;
  explicit ShortestPaths(std::size_t n) { reserve(n); }

  // Distances from `source` following edges forward (Direction::out) or
  // backward (Direction::in). With `count_paths`, also records the number of
  // equal-length shortest paths and the predecessor lists needed for
  // dependency accumulation.
  void run(const TradeNetwork& net, NodeIndex source, Direction dir = Direction::out,
           bool count_paths = false) {
    const auto& g = net.graph();
    const auto n = g.node_count();
    reserve(n);
    std::fill(dist_.begin(), dist_.begin() + static_cast<std::ptrdiff_t>(n), kUnreachable);
    order_.clear();
    heap_.clear();
    if (count_paths) {
      std::fill(sigma_.begin(), sigma_.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
      for (std::size_t v = 0; v < n; ++v) preds_[v].clear();
      sigma_[source] = 1.0;
    }
    std::fill(settled_.begin(), settled_.begin() + static_cast<std::ptrdiff_t>(n), 0);

    if (!net.node_active(source)) {
      dist_[source] = 0.0;
      order_.push_back(source);
      return;
    }

    dist_[source] = 0.0;
    push(0.0, source);
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
      auto [d, u] = heap_.back();
      heap_.pop_back();
      if (settled_[u] || d > dist_[u]) continue;
      settled_[u] = 1;
      order_.push_back(u);
      auto edges = dir == Direction::out ? g.out_edges(u) : g.in_edges(u);
      for (auto e : edges) {
        if (!net.edge_active(e)) continue;
        const auto& edge = g.edge(e);
        NodeIndex v = dir == Direction::out ? edge.target : edge.source;
        double nd = d + g.length(e);
        if (nd < dist_[v]) {
          dist_[v] = nd;
          push(nd, v);
          if (count_paths) {
            sigma_[v] = sigma_[u];
            preds_[v].assign(1, u);
          }
        } else if (count_paths && nd == dist_[v] && !settled_[v]) {
          sigma_[v] += sigma_[u];
          preds_[v].push_back(u);
        }
      }
    }
  }

  [[nodiscard]] std::span<const double> distances() const { return {dist_.data(), size_}; }
  // Reached nodes in nondecreasing distance order, source first.
  [[nodiscard]] std::span<const NodeIndex> order() const { return order_; }
  [[nodiscard]] std::span<const double> path_counts() const { return {sigma_.data(), size_}; }
  [[nodiscard]] std::span<const NodeIndex> predecessors(NodeIndex v) const { return preds_[v]; }

 private:
  void reserve(std::size_t n) {
    size_ = n;
    if (dist_.size() < n) {
      dist_.resize(n);
      sigma_.resize(n);
      preds_.resize(n);
      settled_.resize(n);
    }
  }

  void push(double d, NodeIndex v) {
    heap_.emplace_back(d, v);
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  }

  std::size_t size_ = 0;
  std::vector<double> dist_;
  std::vector<double> sigma_;
  std::vector<std::vector<NodeIndex>> preds_;
  std::vector<std::uint8_t> settled_;
  std::vector<NodeIndex> order_;
  std::vector<std::pair<double, NodeIndex>> heap_;
};

}  // namespace oiltrade
