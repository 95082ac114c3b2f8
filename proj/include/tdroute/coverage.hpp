#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "tdroute/apf.hpp"
#include "tdroute/dca.hpp"
#include "tdroute/network.hpp"

namespace tdroute {

/// Ordered (ancestor, descendant) pairs along the tree's paths, i.e. the sum
/// of depth(v) over reached v != source.
std::uint64_t count_st_pairs(const SearchTree& tree, const RoadNetwork& net);

/// Triangle-area estimate for a corner source on g.k: height 2k-1 times
/// bottom 2n/(2k-1) summed along depth gives about sqrt(n) * n = k^3.
std::uint64_t estimate_st_pairs(std::uint32_t k);

enum class SourceMode { Corners, Perimeter, All, Explicit };

struct SourceSet {
  SourceMode mode = SourceMode::Corners;
  std::vector<NodeId> explicit_nodes;
};

std::vector<NodeId> resolve_sources(const RoadNetwork& net, const SourceSet& set);

struct CoverageReport {
  std::size_t sources_used = 0;
  std::uint64_t st_pairs_covered = 0;
  // Covered ordered pairs (s, t), s != t, over n(n-1).
  double fraction = 0.0;
  std::vector<double> wall_ms;
};

/// One DCA per source, then the union of every (ancestor, descendant) pair
/// of every tree. Sources run in parallel with OpenMP; each thread owns a
/// private pair bitmap that is OR-merged afterwards.
CoverageReport run_coverage(const RoadNetwork& net, const TravelCost& cost, const SourceSet& sources, Seconds t0);
/// Single-threaded reference of run_coverage.
CoverageReport run_coverage_serial(const RoadNetwork& net, const TravelCost& cost, const SourceSet& sources,
                                   Seconds t0);

/// Small induced sub-network around an s-t pair on which online queries run.
struct HotZone {
  NodeId source = 0;
  NodeId target = 0;
  Seconds window_a = 0;
  Seconds window_b = 0;
  // Global ids, ascending.
  std::vector<NodeId> nodes;
  std::vector<LinkId> induced_links;
  // The zone as a stand-alone network in local ids; link i of it is
  // induced_links[i] of the parent network.
  RoadNetwork network;

  NodeId local(NodeId global) const;
  bool contains(NodeId global) const;
};

// 8 * sqrt(n), rounded down.
std::size_t default_zone_cap(std::size_t node_count);

/// Union of the s->t tree paths of `trees` (all rooted at s), grown by
/// breadth-first rings until `size_cap` nodes. The validity window spans
/// the trees' departure times, padded by `window_pad` on both sides.
/// Throws NoZone when no tree reaches t or the path union alone exceeds the cap.
HotZone extract_zone(const RoadNetwork& net, const std::vector<SearchTree>& trees, NodeId s, NodeId t,
                     std::size_t size_cap, Seconds window_pad);

HotZone make_zone(const RoadNetwork& net, std::vector<NodeId> nodes, NodeId s, NodeId t, Seconds window_a,
                  Seconds window_b);

struct ZoneRoute {
  std::vector<NodeId> path;  // global ids, s first
  Seconds arrival = 0;
};

/// DCA restricted to the zone's induced links. Throws ZoneMiss when t is
/// unreachable inside the zone.
ZoneRoute zone_query(const HotZone& zone, const TimeTableBinding& binding, const ApfConfig& cfg, NodeId s, NodeId t,
                     Seconds t0);

struct BopResult {
  Seconds best_t0 = 0;
  Seconds best_delta = 0;
  std::size_t trials = 0;
  std::size_t misses = 0;
};

/// Grid scan of departures t_a, t_a + step, ... <= t_b, minimizing
/// arrival - departure; ties go to the earliest departure. Throws
/// ConfigError on an empty window or step < 1, NoSolution if every trial
/// misses. Departures are evaluated in parallel.
BopResult solve_bop(const HotZone& zone, const TimeTableBinding& binding, const ApfConfig& cfg, NodeId s, NodeId t,
                    Seconds t_a, Seconds t_b, Seconds step);
BopResult solve_bop_serial(const HotZone& zone, const TimeTableBinding& binding, const ApfConfig& cfg, NodeId s,
                           NodeId t, Seconds t_a, Seconds t_b, Seconds step);

void write_zone(std::ostream& out, const HotZone& zone);
HotZone read_zone(std::istream& in, const RoadNetwork& net);
void save_zone(const HotZone& zone, const std::filesystem::path& path);
HotZone load_zone(const std::filesystem::path& path, const RoadNetwork& net);

}  // namespace tdroute
