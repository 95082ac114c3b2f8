#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "tdroute/dca.hpp"
#include "tdroute/error.hpp"
#include "tdroute/oracle.hpp"

namespace tdroute {
namespace {

using testing::flat_instance;
using testing::shared_instance;

void expect_tree_consistent(const RoadNetwork& net, const TravelCost& cost, const SearchTree& tree) {
  std::size_t tree_links = 0, reached = 0;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (!tree.reached(v)) continue;
    ++reached;
    if (v == tree.source) {
      EXPECT_EQ(tree.arrival(v), tree.t0);
      continue;
    }
    const LinkId p = tree.labels[v].parent;
    ASSERT_NE(p, kNoLink);
    const Link& link = net.link(p);
    EXPECT_EQ(link.to, v);
    const Seconds du = tree.arrival(link.from);
    EXPECT_EQ(tree.arrival(v), du + cost.evaluate(link, du).delta);
    ++tree_links;
  }
  EXPECT_EQ(tree_links + 1, reached);
  EXPECT_NO_THROW(tree_depths(tree, net));
}

TEST(Dca, SingleLink) {
  auto inst = flat_instance(RoadNetwork(2, {{0, 0, 1, 500}}), 7);
  const auto tree = run_dca(inst->net, *inst->cost, 0, 40);
  EXPECT_EQ(tree.arrival(1), 40 + inst->cost->evaluate(inst->net.link(0), 40).delta);
  EXPECT_EQ(tree.labels[1].parent, 0u);
  EXPECT_FALSE(run_dca(inst->net, *inst->cost, 1, 0).reached(0));
}

TEST(Dca, ConstantVelocityReducesToStaticDistances) {
  // Grade 7 = 40 kph; every grid length is a multiple of 50 m, i.e. 4.5 s.
  // With chi = 9 s one interval covers exactly 100 m, so time = length / 100 * 9.
  const std::vector<int> grades{40};
  auto inst = std::make_unique<testing::Instance>(generate_grid(6, 3), TimeTableBinding::shared(TimeTable{{1}, 9}), 9);
  inst->tid = Tid::build(9, grades);
  inst->cfg.max_slots = 1 << 16;
  const auto tree = run_dca(inst->net, *inst->cost, 0, 0);
  const auto static_tree = oracle::td_dijkstra(inst->net, *inst->cost, 0, 0);
  for (NodeId v = 0; v < inst->net.node_count(); ++v) {
    EXPECT_EQ(tree.arrival(v), static_tree.arrival(v));
    Meters meters = 0;
    for (LinkId id : tree.links_to(inst->net, v)) meters += inst->net.link(id).length_m;
    // Per-link rounding up to whole seconds only ever adds.
    EXPECT_GE(tree.arrival(v) * 100, meters * 9);
  }
}

TEST(Dca, MatchesOracleOnSmallGrids) {
  std::mt19937_64 rng(11);
  for (auto mode : {TableMode::Wave, TableMode::Random}) {
    for (bool perturb : {false, true}) {
      auto inst = shared_instance(10, mode, perturb ? 21 : 20, 720, perturb);
      for (int trial = 0; trial < 50; ++trial) {
        const NodeId s = static_cast<NodeId>(rng() % inst->net.node_count());
        const Seconds t0 = static_cast<Seconds>(rng() % (720 * 10));
        const auto dca = run_dca(inst->net, *inst->cost, s, t0);
        const auto ref = oracle::td_dijkstra(inst->net, *inst->cost, s, t0);
        for (NodeId v = 0; v < inst->net.node_count(); ++v) ASSERT_EQ(dca.arrival(v), ref.arrival(v));
        expect_tree_consistent(inst->net, *inst->cost, dca);
      }
    }
  }
}

TEST(Dca, MatchesOracleWithPerLinkTablesAndWaiting) {
  const auto net = generate_grid(8, 2);
  auto inst = std::make_unique<testing::Instance>(net, generate_per_link(net, TableMode::Random, 30, 5, true));
  for (NodeId s = 0; s < net.node_count(); s += 7) {
    const auto dca = run_dca(inst->net, *inst->cost, s, 17 * s);
    const auto ref = oracle::td_dijkstra(inst->net, *inst->cost, s, 17 * s);
    for (NodeId v = 0; v < net.node_count(); ++v) ASSERT_EQ(dca.arrival(v), ref.arrival(v));
    expect_tree_consistent(inst->net, *inst->cost, dca);
  }
}

TEST(Dca, Deterministic) {
  auto inst = shared_instance(20, TableMode::Wave, 4);
  const auto a = run_dca(inst->net, *inst->cost, 37, 1234);
  const auto b = run_dca(inst->net, *inst->cost, 37, 1234);
  for (NodeId v = 0; v < inst->net.node_count(); ++v) {
    EXPECT_EQ(a.arrival(v), b.arrival(v));
    EXPECT_EQ(a.labels[v].parent, b.labels[v].parent);
  }
  EXPECT_EQ(a.stats.table_queries, b.stats.table_queries);
  EXPECT_EQ(a.stats.st_pairs, b.stats.st_pairs);
}

TEST(Dca, StatsAreCoherent) {
  auto inst = shared_instance(30, TableMode::Wave, 8);
  const auto tree = run_dca(inst->net, *inst->cost, 0, 0);
  const auto& st = tree.stats;
  EXPECT_GE(st.relaxations, inst->net.link_count());
  EXPECT_GE(st.atq, 1.0);
  EXPECT_DOUBLE_EQ(st.atq, static_cast<double>(st.table_queries) / inst->net.link_count());
  EXPECT_LE(st.dc_nanos + st.sc_nanos, st.total_nanos);
  EXPECT_LE(st.hdm_nanos, st.total_nanos);
  EXPECT_NEAR(st.dc_share() + st.sc_share(), 1.0, 1e-12);
  EXPECT_EQ(st.interrupted, 0u);
  EXPECT_GT(st.lambda(inst->net.node_count()), 0.0);
  std::uint64_t pairs = 0;
  for (auto d : tree_depths(tree, inst->net)) pairs += d > 0 ? d : 0;
  EXPECT_EQ(st.st_pairs, pairs);
}

TEST(Dca, HdmLabelsEveryReachableNodeOnce) {
  auto inst = shared_instance(12, TableMode::Random, 3, 500);
  const auto labeled = hdm_label(inst->net, *inst->cost, 5, 100);
  EXPECT_EQ(labeled.origin.size(), inst->net.node_count());
  EXPECT_EQ(labeled.origin.front(), 5u);
  // Exactly one relaxation per link whose head was unlabeled: n - 1 labels set.
  std::size_t labeled_nodes = 0;
  for (const auto& l : labeled.labels) labeled_nodes += l.reached();
  EXPECT_EQ(labeled_nodes, inst->net.node_count());
  EXPECT_LE(labeled.stats.relaxations, inst->net.link_count());
  for (std::size_t i = 1; i < labeled.origin.size(); ++i) {
    EXPECT_LE(labeled.labels[labeled.origin[i - 1]].arrival, labeled.labels[labeled.origin[i]].arrival);
  }
}

TEST(Dca, CorrectingOptimalLabelsIsAFixpoint) {
  auto inst = shared_instance(12, TableMode::Wave, 6, 500);
  const auto first = run_dca(inst->net, *inst->cost, 9, 50);
  LabelingResult seeded;
  seeded.labels = first.labels;
  for (NodeId v = 0; v < inst->net.node_count(); ++v) seeded.origin.push_back(v);
  const auto again = correct(inst->net, *inst->cost, seeded, 9, 50);
  EXPECT_EQ(again.stats.improvements, 0u);
  EXPECT_EQ(again.stats.decreases, 0u);
  for (NodeId v = 0; v < inst->net.node_count(); ++v) {
    EXPECT_EQ(again.arrival(v), first.arrival(v));
    EXPECT_EQ(again.labels[v].parent, first.labels[v].parent);
  }
}

TEST(Dca, SubPathsAreOptimal) {
  auto inst = shared_instance(9, TableMode::Random, 12, 300);
  const auto tree = run_dca(inst->net, *inst->cost, 40, 77);
  // Each tree prefix is itself the fastest route: compare prefixes with the oracle's labels.
  const auto ref = oracle::td_dijkstra(inst->net, *inst->cost, 40, 77);
  for (NodeId v = 0; v < inst->net.node_count(); ++v) {
    for (NodeId w : tree.path_to(inst->net, v)) EXPECT_EQ(tree.arrival(w), ref.arrival(w));
  }
}

// s -> a -> t and s -> b -> t both take 80 s at 10 m/s; the lanes into t are 300 m and 500 m.
std::unique_ptr<testing::Instance> tie_instance() {
  const std::vector<Link> links{{0, 0, 1, 500}, {1, 1, 0, 500}, {2, 1, 3, 300}, {3, 3, 1, 300},
                                {4, 0, 2, 300}, {5, 2, 0, 300}, {6, 2, 3, 500}, {7, 3, 2, 500}};
  auto inst = flat_instance(RoadNetwork(4, links), 1);
  const std::vector<int> grades{36};
  inst->tid = Tid::build(10, grades);
  return inst;
}

TEST(TieBreak, ShortestAndLongestLane) {
  auto inst = tie_instance();
  const auto& net = inst->net;
  const auto& cost = *inst->cost;
  const auto plain = run_dca(net, cost, 0, 0);
  EXPECT_EQ(plain.arrival(3), 80);
  EXPECT_EQ(tie_break_parent(net, cost, plain, 3, TieBreakMode::ShortestLane), 2u);
  EXPECT_EQ(tie_break_parent(net, cost, plain, 3, TieBreakMode::LongestLane), 6u);
  EXPECT_EQ(tie_break_parent(net, cost, plain, 3, TieBreakMode::None), plain.labels[3].parent);
  // Singleton candidate set leaves the parent alone.
  EXPECT_EQ(tie_break_parent(net, cost, plain, 1, TieBreakMode::LongestLane), 0u);
  EXPECT_FALSE(tie_break_parent(net, cost, plain, 0, TieBreakMode::ShortestLane).has_value());

  const auto shortest = run_dca(net, cost, 0, 0, TieBreakMode::ShortestLane);
  const auto longest = run_dca(net, cost, 0, 0, TieBreakMode::LongestLane);
  EXPECT_EQ(shortest.labels[3].parent, 2u);
  EXPECT_EQ(longest.labels[3].parent, 6u);
  for (NodeId v = 0; v < 4; ++v) {
    EXPECT_EQ(shortest.arrival(v), plain.arrival(v));
    EXPECT_EQ(longest.arrival(v), plain.arrival(v));
  }
}

TEST(TieBreak, NeverChangesArrivals) {
  auto inst = shared_instance(15, TableMode::Wave, 2, 720, false);
  const auto plain = run_dca(inst->net, *inst->cost, 3, 10);
  for (auto mode : {TieBreakMode::ShortestLane, TieBreakMode::LongestLane}) {
    const auto broken = run_dca(inst->net, *inst->cost, 3, 10, mode);
    for (NodeId v = 0; v < inst->net.node_count(); ++v) ASSERT_EQ(broken.arrival(v), plain.arrival(v));
    expect_tree_consistent(inst->net, *inst->cost, broken);
  }
}

TEST(Dca, RejectsBadQueries) {
  auto inst = shared_instance(3, TableMode::Wave, 1, 100);
  EXPECT_THROW(run_dca(inst->net, *inst->cost, 9, 0), ContractViolation);
  EXPECT_THROW(run_dca(inst->net, *inst->cost, 0, -1), ContractViolation);
}

TEST(Dca, InterruptedLinksStayUnreached) {
  // Every slot is grade 0: nothing but the source is ever reached.
  auto inst = std::make_unique<testing::Instance>(generate_grid(3, 1), TimeTableBinding::shared(TimeTable{{0, 0}, 10}));
  const auto tree = run_dca(inst->net, *inst->cost, 4, 0);
  EXPECT_TRUE(tree.reached(4));
  for (NodeId v = 0; v < 9; ++v) {
    if (v != 4) EXPECT_FALSE(tree.reached(v));
  }
  EXPECT_EQ(tree.stats.interrupted, 8u);
  EXPECT_TRUE(tree.path_to(inst->net, 0).empty());
}

}  // namespace
}  // namespace tdroute
