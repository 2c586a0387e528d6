#pragma once

// Node influence indicators. All functions read the active part of a
// network and return one score per baseline node (masked nodes score 0
// unless stated otherwise).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "oiltrade/network.hpp"
#include "oiltrade/shortest_path.hpp"

namespace oiltrade {

using Scores = std::vector<double>;

inline Scores degree(const TradeNetwork& net, Direction dir) {
  Scores s(net.node_count(), 0.0);
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (!net.edge_active(e)) continue;
    const auto& edge = net.graph().edge(e);
    s[dir == Direction::out ? edge.source : edge.target] += 1.0;
  }
  return s;
}

inline Scores strength(const TradeNetwork& net, Direction dir) {
  Scores s(net.node_count(), 0.0);
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (!net.edge_active(e)) continue;
    const auto& edge = net.graph().edge(e);
    s[dir == Direction::out ? edge.source : edge.target] += edge.weight;
  }
  return s;
}

// In plus out strength; the first ranking tie-breaker.
inline Scores total_strength(const TradeNetwork& net) {
  Scores s(net.node_count(), 0.0);
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (!net.edge_active(e)) continue;
    const auto& edge = net.graph().edge(e);
    s[edge.source] += edge.weight;
    s[edge.target] += edge.weight;
  }
  return s;
}

// Harmonic closeness on 1/w lengths: (1/(N-1)) * sum_j 1/d(i,j), with
// unreachable terms 0. Direction::in uses distances d(j,i) towards i. Both
// directions run forward searches so every distance is summed source first.
inline Scores closeness(const TradeNetwork& net, Direction dir) {
  const auto n = net.node_count();
  Scores s(n, 0.0);
  if (n < 2) return s;
  ShortestPaths paths(n);
  for (NodeIndex i = 0; i < n; ++i) {
    if (!net.node_active(i)) continue;
    paths.run(net, i, Direction::out);
    auto dist = paths.distances();
    if (dir == Direction::out) {
      double sum = 0.0;
      for (NodeIndex j = 0; j < n; ++j) {
        if (j == i || dist[j] == kUnreachable) continue;
        sum += 1.0 / dist[j];
      }
      s[i] = sum;
    } else {
      for (NodeIndex j = 0; j < n; ++j) {
        if (j == i || dist[j] == kUnreachable) continue;
        s[j] += 1.0 / dist[j];
      }
    }
  }
  for (auto& x : s) x /= static_cast<double>(n - 1);
  return s;
}

// Shortest-path betweenness on 1/w lengths by dependency accumulation over
// ordered pairs; equal-length shortest paths share each pair evenly.
// Unnormalized.
inline Scores betweenness(const TradeNetwork& net) {
  const auto n = net.node_count();
  Scores bc(n, 0.0);
  ShortestPaths paths(n);
  std::vector<double> delta(n, 0.0);
  for (NodeIndex s = 0; s < n; ++s) {
    if (!net.node_active(s)) continue;
    paths.run(net, s, Direction::out, /*count_paths=*/true);
    auto order = paths.order();
    auto sigma = paths.path_counts();
    for (auto v : order) delta[v] = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeIndex w = *it;
      for (auto v : paths.predecessors(w)) {
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  return bc;
}

struct PageRankResult {
  Scores scores;
  int iterations = 0;
  bool converged = false;
};

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  int max_iterations = 200;
};

// Weighted PageRank: a walker leaves u along u->v with probability
// w_uv / out_strength(u); dangling mass is spread uniformly.
inline PageRankResult pagerank(const TradeNetwork& net, PageRankOptions opt = {}) {
  const auto n = net.node_count();
  PageRankResult r;
  if (n == 0) {
    r.converged = true;
    return r;
  }
  const auto& g = net.graph();
  auto out_strength = strength(net, Direction::out);
  const double nd = static_cast<double>(n);
  Scores x(n, 1.0 / nd), next(n);
  for (r.iterations = 1; r.iterations <= opt.max_iterations; ++r.iterations) {
    double dangling = 0.0;
    for (NodeIndex u = 0; u < n; ++u) {
      if (out_strength[u] == 0.0) dangling += x[u];
    }
    const double base = (1.0 - opt.damping) / nd + opt.damping * dangling / nd;
    for (NodeIndex v = 0; v < n; ++v) {
      double in = 0.0;
      for (auto e : g.in_edges(v)) {
        if (!net.edge_active(e)) continue;
        const auto& edge = g.edge(e);
        in += x[edge.source] * edge.weight / out_strength[edge.source];
      }
      next[v] = base + opt.damping * in;
    }
    double change = 0.0;
    for (NodeIndex v = 0; v < n; ++v) change += std::abs(next[v] - x[v]);
    x.swap(next);
    if (change < opt.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.iterations = std::min(r.iterations, opt.max_iterations);
  r.scores = std::move(x);
  return r;
}

struct HitsResult {
  Scores hubs;
  Scores authorities;
  int iterations = 0;
  bool converged = false;
};

// Power iteration a = A^T h, h = A a on the weighted adjacency, both
// L2-normalized every step. Throws std::invalid_argument without edges.
inline HitsResult hits(const TradeNetwork& net, double tolerance = 1e-10, int max_iterations = 500) {
  if (net.active_edge_count() == 0) throw std::invalid_argument("HITS needs at least one active edge");
  const auto n = net.node_count();
  const auto& g = net.graph();
  HitsResult r;
  Scores h(n, 1.0 / std::sqrt(static_cast<double>(n))), a(n), h_next(n);

  auto normalize = [](Scores& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
  };

  Scores a_prev(n, 0.0);
  for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(h_next.begin(), h_next.end(), 0.0);
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      if (!net.edge_active(e)) continue;
      const auto& edge = g.edge(e);
      a[edge.target] += edge.weight * h[edge.source];
    }
    normalize(a);
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      if (!net.edge_active(e)) continue;
      const auto& edge = g.edge(e);
      h_next[edge.source] += edge.weight * a[edge.target];
    }
    normalize(h_next);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      change += std::abs(h_next[i] - h[i]) + std::abs(a[i] - a_prev[i]);
    }
    h.swap(h_next);
    a_prev = a;
    if (change < tolerance) {
      r.converged = true;
      break;
    }
  }
  r.iterations = std::min(r.iterations, max_iterations);
  r.hubs = std::move(h);
  r.authorities = std::move(a);
  return r;
}

// Sorted neighbour lists of the binarized undirected projection.
inline std::vector<std::vector<NodeIndex>> undirected_neighbors(const TradeNetwork& net) {
  std::vector<std::vector<NodeIndex>> adj(net.node_count());
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (!net.edge_active(e)) continue;
    const auto& edge = net.graph().edge(e);
    adj[edge.source].push_back(edge.target);
    adj[edge.target].push_back(edge.source);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

// Local clustering coefficient of the binarized undirected projection:
// triangles / (k(k-1)/2), 0 for k < 2.
inline Scores clustering(const TradeNetwork& net) {
  auto adj = undirected_neighbors(net);
  Scores c(net.node_count(), 0.0);
  for (NodeIndex i = 0; i < adj.size(); ++i) {
    const auto& ni = adj[i];
    const auto k = ni.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < k; ++a) {
      const auto& na = adj[ni[a]];
      for (std::size_t b = a + 1; b < k; ++b) {
        if (std::binary_search(na.begin(), na.end(), ni[b])) ++links;
      }
    }
    c[i] = static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
  }
  return c;
}

using ModuleAssignment = std::vector<std::uint32_t>;

namespace detail {

struct LevelGraph {
  // adjacency[i]: (neighbour, weight), neighbour != i.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
  std::vector<double> self_loop;
};

// One local-moving pass series. Returns true if any node changed module.
inline bool local_moving(const LevelGraph& g, std::vector<std::uint32_t>& community, std::mt19937_64& rng) {
  const auto n = g.adjacency.size();
  std::vector<double> k(n, 0.0);
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto [j, w] : g.adjacency[i]) k[i] += w;
    k[i] += 2.0 * g.self_loop[i];
    m2 += k[i];
  }
  if (m2 <= 0.0) return false;

  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[community[i]] += k[i];

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (auto i : order) {
      const auto own = community[i];
      touched.clear();
      for (auto [j, w] : g.adjacency[i]) {
        auto c = community[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[own] -= k[i];
      auto gain = [&](std::uint32_t c) { return link[c] - tot[c] * k[i] / m2; };
      auto best = own;
      double best_gain = gain(own);
      for (auto c : touched) {
        double gc = gain(c);
        if (gc > best_gain + 1e-12 * std::abs(best_gain) + 1e-300) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += k[i];
      for (auto c : touched) link[c] = 0.0;
      if (best != own) {
        community[i] = best;
        moved = true;
        any = true;
      }
    }
  }
  return any;
}

}  // namespace detail

// Louvain-style greedy modularity agglomeration on the undirected projection
// with w_uv + w_vu weights. The node visit order of every level is a shuffle
// drawn from `seed`, so a seed fixes the result. Module ids are numbered by
// first appearance in node order.
inline ModuleAssignment detect_communities(const TradeNetwork& net, std::uint64_t seed) {
  const auto n = net.node_count();
  std::mt19937_64 rng(seed);

  detail::LevelGraph level;
  level.adjacency.resize(n);
  level.self_loop.assign(n, 0.0);
  {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> raw(n);
    for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
      if (!net.edge_active(e)) continue;
      const auto& edge = net.graph().edge(e);
      raw[edge.source].emplace_back(edge.target, edge.weight);
      raw[edge.target].emplace_back(edge.source, edge.weight);
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto& r = raw[i];
      std::sort(r.begin(), r.end());
      for (auto [j, w] : r) {
        if (!level.adjacency[i].empty() && level.adjacency[i].back().first == j) {
          level.adjacency[i].back().second += w;
        } else {
          level.adjacency[i].emplace_back(j, w);
        }
      }
    }
  }

  ModuleAssignment node_module(n);
  std::iota(node_module.begin(), node_module.end(), 0u);

  while (true) {
    const auto m = level.adjacency.size();
    std::vector<std::uint32_t> community(m);
    std::iota(community.begin(), community.end(), 0u);
    if (!detail::local_moving(level, community, rng)) break;

    // Renumber communities densely in first-appearance order.
    std::vector<std::uint32_t> remap(m, UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : community) {
      if (remap[c] == UINT32_MAX) remap[c] = next++;
      c = remap[c];
    }
    for (auto& nm : node_module) nm = community[nm];
    if (next == m) break;

    detail::LevelGraph up;
    up.adjacency.resize(next);
    up.self_loop.assign(next, 0.0);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> raw(next);
    for (std::uint32_t i = 0; i < m; ++i) {
      up.self_loop[community[i]] += level.self_loop[i];
      for (auto [j, w] : level.adjacency[i]) {
        auto ci = community[i], cj = community[j];
        if (ci == cj) {
          if (i < j) up.self_loop[ci] += w;
        } else {
          raw[ci].emplace_back(cj, w);
        }
      }
    }
    for (std::uint32_t c = 0; c < next; ++c) {
      auto& r = raw[c];
      std::sort(r.begin(), r.end());
      for (auto [j, w] : r) {
        if (!up.adjacency[c].empty() && up.adjacency[c].back().first == j) {
          up.adjacency[c].back().second += w;
        } else {
          up.adjacency[c].emplace_back(j, w);
        }
      }
    }
    level = std::move(up);
  }

  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : node_module) {
    if (remap[c] == UINT32_MAX) remap[c] = next++;
    c = remap[c];
  }
  return node_module;
}

// Newman modularity of an assignment on the undirected weighted projection.
inline double modularity(const TradeNetwork& net, const ModuleAssignment& assignment) {
  const auto n = net.node_count();
  std::vector<double> k(n, 0.0);
  double m2 = 0.0, inside = 0.0;
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (!net.edge_active(e)) continue;
    const auto& edge = net.graph().edge(e);
    k[edge.source] += edge.weight;
    k[edge.target] += edge.weight;
    m2 += 2.0 * edge.weight;
    if (assignment[edge.source] == assignment[edge.target]) inside += 2.0 * edge.weight;
  }
  if (m2 == 0.0) return 0.0;
  std::uint32_t modules = 0;
  for (auto a : assignment) modules = std::max(modules, a + 1);
  std::vector<double> tot(modules, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[assignment[i]] += k[i];
  double expected = 0.0;
  for (double t : tot) expected += (t / m2) * (t / m2);
  return inside / m2 - expected;
}

struct ModuleIndicators {
  Scores within_module;   // z-score of within-module degree
  Scores outside_module;  // links to other modules
  Scores participation;   // 1 - sum_s (k_is / k_i)^2
};

// Degrees are taken on the binarized undirected projection. A module whose
// within-degrees have zero spread gives z = 0 to all its members.
inline ModuleIndicators module_indicators(const TradeNetwork& net, const ModuleAssignment& assignment) {
  const auto n = net.node_count();
  if (assignment.size() != n) throw std::invalid_argument("module assignment size mismatch");
  auto adj = undirected_neighbors(net);
  std::uint32_t modules = 0;
  for (auto a : assignment) modules = std::max(modules, a + 1);

  ModuleIndicators out{Scores(n, 0.0), Scores(n, 0.0), Scores(n, 0.0)};
  Scores within(n, 0.0);
  std::vector<double> per_module(modules, 0.0);
  for (NodeIndex i = 0; i < n; ++i) {
    const auto& ni = adj[i];
    std::fill(per_module.begin(), per_module.end(), 0.0);
    for (auto j : ni) per_module[assignment[j]] += 1.0;
    within[i] = per_module[assignment[i]];
    const auto k = static_cast<double>(ni.size());
    out.outside_module[i] = k - within[i];
    if (k > 0.0) {
      double sum = 0.0;
      for (double ks : per_module) sum += (ks / k) * (ks / k);
      out.participation[i] = 1.0 - sum;
    }
  }

  std::vector<double> mean(modules, 0.0), sq(modules, 0.0), count(modules, 0.0);
  for (NodeIndex i = 0; i < n; ++i) {
    mean[assignment[i]] += within[i];
    count[assignment[i]] += 1.0;
  }
  for (std::uint32_t s = 0; s < modules; ++s) {
    if (count[s] > 0.0) mean[s] /= count[s];
  }
  for (NodeIndex i = 0; i < n; ++i) {
    double d = within[i] - mean[assignment[i]];
    sq[assignment[i]] += d * d;
  }
  for (NodeIndex i = 0; i < n; ++i) {
    auto s = assignment[i];
    double sd = std::sqrt(sq[s] / count[s]);
    out.within_module[i] = sd > 0.0 ? (within[i] - mean[s]) / sd : 0.0;
  }
  return out;
}

}  // namespace oiltrade
