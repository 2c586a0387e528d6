#pragma once

// Seeded synthetic trade networks with a few dominant hubs, for tests,
// benchmarks and the `synth` command.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oiltrade/network.hpp"

namespace oiltrade {

struct SyntheticOptions {
  std::size_t nodes = 200;
  std::size_t links_per_node = 3;  // preferential-attachment links per newcomer
  double reciprocity = 0.3;        // chance a link is traded both ways
  double weight_sigma = 1.0;       // lognormal noise on edge weights
  double base_weight = 1e6;
  std::uint64_t seed = 1;
  int year = 2000;
};

inline std::string economy_code(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "E%03zu", i);
  return buf;
}

// Preferential attachment on total degree; each link gets a random
// direction (or both). Weights scale with sqrt(k_i * k_j) times lognormal
// noise, so hubs carry most of the volume.
inline std::vector<FlowRecord> hub_dominated_flows(const SyntheticOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = opt.nodes;
  const auto m = std::max<std::size_t>(1, opt.links_per_node);

  std::vector<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::size_t> endpoints;  // each node once per incident link
  const auto seed_size = std::min(n, m + 1);
  for (std::size_t i = 0; i < seed_size; ++i) {
    for (std::size_t j = i + 1; j < seed_size; ++j) {
      links.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  for (std::size_t v = seed_size; v < n; ++v) {
    std::vector<std::size_t> chosen;
    while (chosen.size() < std::min(m, v)) {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      auto u = endpoints[pick(rng)];
      if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) chosen.push_back(u);
    }
    for (auto u : chosen) {
      links.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }

  std::vector<double> k(n, 0.0);
  for (auto [a, b] : links) {
    k[a] += 1.0;
    k[b] += 1.0;
  }
  std::lognormal_distribution<double> noise(0.0, opt.weight_sigma);
  std::vector<FlowRecord> flows;
  auto add = [&](std::size_t s, std::size_t t) {
    flows.push_back({economy_code(s), economy_code(t), opt.base_weight * std::sqrt(k[s] * k[t]) * noise(rng)});
  };
  for (auto [a, b] : links) {
    bool forward = unit(rng) < 0.5;
    auto s = forward ? a : b;
    auto t = forward ? b : a;
    add(s, t);
    if (unit(rng) < opt.reciprocity) add(t, s);
  }
  return flows;
}

inline TradeNetwork hub_dominated_network(const SyntheticOptions& opt) {
  auto flows = hub_dominated_flows(opt);
  return build_network(std::span<const FlowRecord>(flows), opt.year);
}

}  // namespace oiltrade
