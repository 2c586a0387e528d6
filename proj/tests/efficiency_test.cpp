#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oiltrade/efficiency.hpp"
#include "test_support.hpp"

using namespace oiltrade;
using oiltrade::testkit::brute_efficiency;
using oiltrade::testkit::brute_force;
using oiltrade::testkit::random_digraph;

TEST(PathEfficiency, DirectEdgeIsItsWeight) {
  auto net = build_network({{"A", "B", 3.5}});
  EXPECT_DOUBLE_EQ(path_efficiency(net, 0, 1), 3.5);
  EXPECT_EQ(path_efficiency(net, 1, 0), 0.0);
}

TEST(PathEfficiency, ChainIsHarmonicCombination) {
  auto net = build_network({{"A", "B", 2}, {"B", "C", 2}});
  EXPECT_DOUBLE_EQ(path_efficiency(net, 0, 2), 1.0);
  auto skewed = build_network({{"A", "B", 3}, {"B", "C", 6}});
  EXPECT_DOUBLE_EQ(path_efficiency(skewed, 0, 2), 1.0 / (1.0 / 3 + 1.0 / 6));
}

TEST(PathEfficiency, SamePairIsAnError) {
  auto net = build_network({{"A", "B", 1}});
  EXPECT_THROW((void)path_efficiency(net, 0, 0), std::invalid_argument);
}

TEST(NetworkEfficiency, CompleteUniformEqualsWeight) {
  for (double w : {0.5, 1.0, 3.7, 1e9}) {
    auto net = testkit::complete_uniform(5, w);
    auto r = network_efficiency(net);
    EXPECT_NEAR(r.raw_efficiency, w, 1e-12 * w);
    EXPECT_NEAR(r.normalized_efficiency, 1.0, 1e-12);
    EXPECT_EQ(r.pair_count, 20.0);
  }
}

TEST(NetworkEfficiency, EmptyEdgeSetIsZero) {
  auto net = build_network({{"A", "A", 1}, {"B", "B", 1}, {"C", "C", 1}});
  auto r = network_efficiency(net);
  EXPECT_EQ(r.raw_efficiency, 0.0);
  EXPECT_EQ(r.normalized_efficiency, 0.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(NetworkEfficiency, FewerThanTwoNodesIsDegenerate) {
  auto r = network_efficiency(build_network({{"A", "A", 1}}));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.raw_efficiency, 0.0);
}

TEST(NormalizedEfficiency, TwoNodeSingleEdge) {
  const double w = 42.0;
  auto net = build_network({{"A", "B", w}});
  auto r = normalized_efficiency(net, w);
  EXPECT_DOUBLE_EQ(r.raw_efficiency, w / 2);
  EXPECT_NEAR(r.normalized_efficiency, 0.5, 1e-12);
}

TEST(NormalizedEfficiency, RejectsNonPositiveReference) {
  auto net = build_network({{"A", "B", 1}});
  EXPECT_THROW(normalized_efficiency(net, 0.0), std::invalid_argument);
  EXPECT_THROW(normalized_efficiency(net, -2.0), std::invalid_argument);
}

TEST(NormalizedEfficiency, JointScalingLeavesValueUnchanged) {
  std::mt19937_64 rng(3);
  auto net = random_digraph(rng, 7, 0.4);
  const double ref = *stats(net).mean_edge_weight;
  const double base = normalized_efficiency(net, ref).normalized_efficiency;
  for (double c : {1e-3, 7.0, 1e6}) {
    EXPECT_NEAR(normalized_efficiency(scaled(net, c), ref * c).normalized_efficiency, base, 1e-12 * base);
  }
}

TEST(NetworkEfficiency, MatchesSimplePathOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 7;
    double p = 0.15 + 0.7 * static_cast<double>(rng() % 100) / 100.0;
    auto net = random_digraph(rng, n, p);
    EfficiencyEvaluator eval;
    EXPECT_NEAR(eval.raw(net), brute_efficiency(brute_force(net)), 1e-12) << "trial " << trial;
  }
}

TEST(NetworkEfficiency, ScaleLinearity) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto net = random_digraph(rng, 3 + rng() % 10, 0.3);
    EfficiencyEvaluator eval;
    double base = eval.raw(net);
    for (double c : {1e-3, 2.5, 1e6}) {
      double scaled_e = eval.raw(scaled(net, c));
      EXPECT_NEAR(scaled_e, c * base, 1e-12 * c * base + 1e-300);
    }
  }
}

TEST(NetworkEfficiency, AddingAnEdgeNeverHurts) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> w(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 6;
    std::vector<FlowRecord> flows;
    for (std::size_t i = 0; i < n; ++i) flows.push_back({testkit::node_name(i), testkit::node_name(i), 1});
    for (int k = 0; k < 8; ++k) {
      auto s = rng() % n, t = rng() % n;
      if (s != t) flows.push_back({testkit::node_name(s), testkit::node_name(t), w(rng)});
    }
    auto before = build_network(std::span<const FlowRecord>(flows));
    auto s = rng() % n, t = (s + 1 + rng() % (n - 1)) % n;
    flows.push_back({testkit::node_name(s), testkit::node_name(t), w(rng)});
    auto after = build_network(std::span<const FlowRecord>(flows));
    EfficiencyEvaluator eval;
    for (NodeIndex i = 0; i < n; ++i) {
      for (NodeIndex j = 0; j < n; ++j) {
        if (i == j) continue;
        EXPECT_GE(eval.pair(after, i, j), eval.pair(before, i, j));
      }
    }
    EXPECT_GE(eval.raw(after), eval.raw(before));
  }
}

TEST(NetworkEfficiency, SymmetricNetworkHasSymmetricPairs) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> w(0.1, 10.0);
  std::vector<FlowRecord> flows;
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = i + 1; j < 7; ++j) {
      if (rng() % 2) continue;
      double x = w(rng);
      flows.push_back({testkit::node_name(i), testkit::node_name(j), x});
      flows.push_back({testkit::node_name(j), testkit::node_name(i), x});
    }
  }
  auto net = build_network(std::span<const FlowRecord>(flows));
  EfficiencyEvaluator eval;
  for (NodeIndex i = 0; i < net.node_count(); ++i) {
    for (NodeIndex j = i + 1; j < net.node_count(); ++j) {
      EXPECT_NEAR(eval.pair(net, i, j), eval.pair(net, j, i), 1e-12);
    }
  }
}

TEST(NetworkEfficiency, FiniteAndNonNegativeUnderMasks) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = random_digraph(rng, 8, 0.35);
    for (NodeIndex i = 0; i < net.node_count(); ++i) {
      if (rng() % 3 == 0) net.shock_nodes(std::span<const NodeIndex>(&i, 1));
    }
    EfficiencyEvaluator eval;
    double e = eval.raw(net);
    EXPECT_TRUE(std::isfinite(e));
    EXPECT_GE(e, 0.0);
    EXPECT_NEAR(e, brute_efficiency(brute_force(net)), 1e-12);
  }
}
