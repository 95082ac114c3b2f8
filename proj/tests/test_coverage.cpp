#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "tdroute/coverage.hpp"
#include "tdroute/error.hpp"
#include "tdroute/oracle.hpp"

namespace tdroute {
namespace {

// Grade 17 = 90 kph = 25 m/s exactly, so with grid lengths every through-time
// is independent of the departure second.
constexpr Grade kExactGrade = 17;

RoadNetwork path3() { return RoadNetwork(3, {{0, 0, 1, 500}, {1, 1, 0, 500}, {2, 1, 2, 500}, {3, 2, 1, 500}}); }

TEST(StPairs, PathOfThree) {
  auto inst = testing::flat_instance(path3(), 5);
  const auto tree = run_dca(inst->net, *inst->cost, 0, 0);
  EXPECT_EQ(count_st_pairs(tree, inst->net), 3u);
  EXPECT_EQ(tree.stats.st_pairs, 3u);
}

TEST(StPairs, Estimate) {
  EXPECT_EQ(estimate_st_pairs(2), 8u);
  EXPECT_EQ(estimate_st_pairs(50), 125000u);
  EXPECT_EQ(estimate_st_pairs(100), 1000000u);
  EXPECT_THROW(estimate_st_pairs(1), InvalidInstance);
}

TEST(Sources, Resolution) {
  const auto net = generate_grid(6, 1);
  EXPECT_EQ(resolve_sources(net, {SourceMode::Corners, {}}).size(), 4u);
  EXPECT_EQ(resolve_sources(net, {SourceMode::Perimeter, {}}).size(), 20u);
  EXPECT_EQ(resolve_sources(net, {SourceMode::All, {}}).size(), 36u);
  EXPECT_EQ(resolve_sources(net, {SourceMode::Explicit, {3, 9}}), (std::vector<NodeId>{3, 9}));
  EXPECT_THROW(resolve_sources(net, {SourceMode::Explicit, {36}}), ConfigError);
  EXPECT_THROW(resolve_sources(path3(), {SourceMode::Corners, {}}), ConfigError);
}

TEST(Coverage, AllSourcesCoverEverything) {
  auto inst = testing::shared_instance(5, TableMode::Wave, 3, 720);
  const auto report = run_coverage(inst->net, *inst->cost, {SourceMode::All, {}}, 0);
  EXPECT_EQ(report.sources_used, 25u);
  EXPECT_EQ(report.st_pairs_covered, 25u * 24u);
  EXPECT_DOUBLE_EQ(report.fraction, 1.0);
  EXPECT_EQ(report.wall_ms.size(), 25u);
}

TEST(Coverage, SingleCornerCoversItsOwnRow) {
  auto inst = testing::shared_instance(8, TableMode::Random, 2, 720);
  const auto report = run_coverage(inst->net, *inst->cost, {SourceMode::Explicit, {0}}, 100);
  EXPECT_GE(report.st_pairs_covered, inst->net.node_count() - 1);
  const auto tree = run_dca(inst->net, *inst->cost, 0, 100);
  EXPECT_EQ(report.st_pairs_covered, count_st_pairs(tree, inst->net));
}

TEST(Coverage, ParallelMatchesSerial) {
  for (auto mode : {SourceMode::Corners, SourceMode::Perimeter}) {
    auto inst = testing::shared_instance(12, TableMode::Wave, 9, 720);
    const auto par = run_coverage(inst->net, *inst->cost, {mode, {}}, 250);
    const auto ser = run_coverage_serial(inst->net, *inst->cost, {mode, {}}, 250);
    EXPECT_EQ(par.sources_used, ser.sources_used);
    EXPECT_EQ(par.st_pairs_covered, ser.st_pairs_covered);
    EXPECT_DOUBLE_EQ(par.fraction, ser.fraction);
    EXPECT_GT(par.fraction, 0.0);
    EXPECT_LE(par.fraction, 1.0);
  }
}

TEST(Zone, DefaultCap) {
  EXPECT_EQ(default_zone_cap(10000), 800u);
  EXPECT_EQ(default_zone_cap(2500), 400u);
}

TEST(Zone, ContainsEverySampledPath) {
  auto inst = testing::shared_instance(20, TableMode::Wave, 5, 720);
  std::vector<SearchTree> trees;
  for (Seconds t0 : {0, 600, 1200}) trees.push_back(run_dca(inst->net, *inst->cost, 21, t0));
  const NodeId t = 378;
  const auto zone = extract_zone(inst->net, trees, 21, t, 100, 50);
  EXPECT_LE(zone.nodes.size(), 100u);
  EXPECT_EQ(zone.window_a, 0);
  EXPECT_EQ(zone.window_b, 1250);
  for (const auto& tree : trees) {
    for (NodeId v : tree.path_to(inst->net, t)) EXPECT_TRUE(zone.contains(v));
  }
  EXPECT_TRUE(std::is_sorted(zone.nodes.begin(), zone.nodes.end()));
  for (std::size_t i = 0; i < zone.induced_links.size(); ++i) {
    const Link& g = inst->net.link(zone.induced_links[i]);
    const Link& l = zone.network.link(static_cast<LinkId>(i));
    EXPECT_EQ(zone.nodes[l.from], g.from);
    EXPECT_EQ(zone.nodes[l.to], g.to);
    EXPECT_EQ(l.length_m, g.length_m);
  }
  // Sampled departures route exactly as on the full graph.
  for (const auto& tree : trees) {
    const auto route = zone_query(zone, inst->binding, inst->cfg, 21, t, tree.t0);
    EXPECT_EQ(route.arrival, tree.arrival(t));
    EXPECT_EQ(route.path.front(), 21u);
    EXPECT_EQ(route.path.back(), t);
  }
}

TEST(Zone, Errors) {
  auto inst = testing::shared_instance(10, TableMode::Wave, 5, 720);
  std::vector<SearchTree> trees{run_dca(inst->net, *inst->cost, 0, 0)};
  EXPECT_THROW(extract_zone(inst->net, trees, 0, 99, 3, 0), NoZone);
  EXPECT_THROW(extract_zone(inst->net, trees, 1, 99, 100, 0), ContractViolation);
  EXPECT_THROW(make_zone(inst->net, {0, 1}, 0, 99, 0, 10), NoZone);
  const auto zone = extract_zone(inst->net, trees, 0, 99, 80, 100);
  EXPECT_THROW(zone_query(zone, inst->binding, inst->cfg, 0, 99, 101), ContractViolation);
  EXPECT_EQ(zone.nodes.size(), 80u);
  NodeId outside = 0;
  while (zone.contains(outside)) ++outside;
  EXPECT_THROW(zone.local(outside), ContractViolation);
}

TEST(Zone, WholeGraphMatchesFullSearch) {
  auto inst = testing::shared_instance(10, TableMode::Random, 8, 720);
  std::vector<NodeId> all(100);
  for (NodeId v = 0; v < 100; ++v) all[v] = v;
  const auto zone = make_zone(inst->net, all, 4, 87, 0, 7200);
  EXPECT_EQ(zone.induced_links.size(), inst->net.link_count());
  for (Seconds t0 : {0, 333, 7200}) {
    const auto full = run_dca(inst->net, *inst->cost, 4, t0);
    const auto route = zone_query(zone, inst->binding, inst->cfg, 4, 87, t0);
    EXPECT_EQ(route.arrival, full.arrival(87));
    EXPECT_EQ(route.path, full.path_to(inst->net, 87));
  }
}

TEST(Zone, MissingCutNodeIsAMiss) {
  auto inst = testing::flat_instance(path3(), 5);
  const auto zone = make_zone(inst->net, {0, 2}, 0, 2, 0, 100);
  EXPECT_TRUE(zone.induced_links.empty());
  EXPECT_THROW(zone_query(zone, inst->binding, inst->cfg, 0, 2, 0), ZoneMiss);
  EXPECT_THROW(solve_bop(zone, inst->binding, inst->cfg, 0, 2, 0, 100, 10), NoSolution);
  EXPECT_THROW(solve_bop_serial(zone, inst->binding, inst->cfg, 0, 2, 0, 100, 10), NoSolution);
}

TEST(ZoneFile, RoundTrip) {
  auto inst = testing::shared_instance(10, TableMode::Wave, 5, 720);
  std::vector<SearchTree> trees{run_dca(inst->net, *inst->cost, 3, 40)};
  const auto zone = extract_zone(inst->net, trees, 3, 96, 40, 20);
  std::stringstream io;
  write_zone(io, zone);
  const auto back = read_zone(io, inst->net);
  EXPECT_EQ(back.nodes, zone.nodes);
  EXPECT_EQ(back.induced_links, zone.induced_links);
  EXPECT_EQ(back.source, 3u);
  EXPECT_EQ(back.target, 96u);
  EXPECT_EQ(back.window_a, zone.window_a);
  EXPECT_EQ(back.window_b, zone.window_b);
  std::istringstream bad("zone 2 0 1 0 10\n0 x\n\n");
  EXPECT_THROW(read_zone(bad, inst->net), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(read_zone(empty, inst->net), ParseError);
}

TEST(Bop, FlatTablesPickTheEarliestDeparture) {
  auto inst = testing::flat_instance(generate_grid(6, 4), kExactGrade);
  std::vector<NodeId> all(36);
  for (NodeId v = 0; v < 36; ++v) all[v] = v;
  const auto zone = make_zone(inst->net, all, 0, 35, 0, 1000);
  const auto result = solve_bop(zone, inst->binding, inst->cfg, 0, 35, 120, 900, 7);
  EXPECT_EQ(result.best_t0, 120);
  EXPECT_EQ(result.misses, 0u);
  EXPECT_EQ(result.trials, 112u);
  EXPECT_EQ(result.best_delta, run_dca(inst->net, *inst->cost, 0, 0).arrival(35));
}

TEST(Bop, StepWiderThanWindowIsOneTrial) {
  auto inst = testing::flat_instance(generate_grid(4, 4), kExactGrade);
  const auto zone = make_zone(inst->net, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, 0, 15, 0, 100);
  const auto result = solve_bop_serial(zone, inst->binding, inst->cfg, 0, 15, 10, 20, 50);
  EXPECT_EQ(result.trials, 1u);
  EXPECT_EQ(result.best_t0, 10);
}

TEST(Bop, ValidatesWindow) {
  auto inst = testing::flat_instance(generate_grid(3, 4), kExactGrade);
  const auto zone = make_zone(inst->net, {0, 1, 2, 3, 4, 5, 6, 7, 8}, 0, 8, 100, 200);
  for (auto solve : {&solve_bop, &solve_bop_serial}) {
    EXPECT_THROW(solve(zone, inst->binding, inst->cfg, 0, 8, 150, 140, 1), ConfigError);
    EXPECT_THROW(solve(zone, inst->binding, inst->cfg, 0, 8, 150, 160, 0), ConfigError);
    EXPECT_THROW(solve(zone, inst->binding, inst->cfg, 0, 8, 50, 160, 1), ContractViolation);
    EXPECT_THROW(solve(zone, inst->binding, inst->cfg, 0, 8, 150, 260, 1), ContractViolation);
  }
}

TEST(Bop, ParallelMatchesSerialAndFullScan) {
  auto inst = testing::shared_instance(12, TableMode::Wave, 17, 720);
  std::vector<NodeId> all(inst->net.node_count());
  for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
  const auto zone = make_zone(inst->net, all, 13, 130, 0, 7200);
  const auto par = solve_bop(zone, inst->binding, inst->cfg, 13, 130, 300, 2700, 30);
  const auto ser = solve_bop_serial(zone, inst->binding, inst->cfg, 13, 130, 300, 2700, 30);
  EXPECT_EQ(par.best_t0, ser.best_t0);
  EXPECT_EQ(par.best_delta, ser.best_delta);
  Seconds best_t0 = -1, best_delta = kUnreached;
  for (Seconds t0 = 300; t0 <= 2700; t0 += 30) {
    const Seconds delta = oracle::td_dijkstra(inst->net, *inst->cost, 13, t0).arrival(130) - t0;
    if (delta < best_delta) {
      best_delta = delta;
      best_t0 = t0;
    }
  }
  EXPECT_EQ(par.best_t0, best_t0);
  EXPECT_EQ(par.best_delta, best_delta);
}

}  // namespace
}  // namespace tdroute
