#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tdroute/apf.hpp"
#include "tdroute/network.hpp"
#include "tdroute/types.hpp"

namespace tdroute {

enum class LabelState : std::uint8_t { Unlabeled, Labeled, Settled };

struct Label {
  Seconds arrival = kUnreached;
  LinkId parent = kNoLink;
  LabelState state = LabelState::Unlabeled;

  bool reached() const noexcept { return state != LabelState::Unlabeled; }
};

struct RunStats {
  std::uint64_t table_queries = 0;
  double atq = 0.0;
  std::uint64_t relaxations = 0;
  std::uint64_t interrupted = 0;
  std::uint64_t extractions = 0;
  std::uint64_t decreases = 0;
  std::uint64_t improvements = 0;
  std::int64_t dc_nanos = 0;
  std::int64_t sc_nanos = 0;
  std::int64_t hdm_nanos = 0;
  std::int64_t total_nanos = 0;
  std::uint64_t st_pairs = 0;

  // (extractions + decreases) / n
  double lambda(std::size_t n) const {
    return n == 0 ? 0.0 : static_cast<double>(extractions + decreases) / static_cast<double>(n);
  }
  double dc_share() const {
    const auto sum = dc_nanos + sc_nanos;
    return sum == 0 ? 0.0 : static_cast<double>(dc_nanos) / static_cast<double>(sum);
  }
  double sc_share() const {
    const auto sum = dc_nanos + sc_nanos;
    return sum == 0 ? 0.0 : static_cast<double>(sc_nanos) / static_cast<double>(sum);
  }
};

/// One-to-all result. For every tree link (u, v):
/// labels[v].arrival == labels[u].arrival + delta((u, v), labels[u].arrival).
struct SearchTree {
  NodeId source = 0;
  Seconds t0 = 0;
  std::vector<Label> labels;
  RunStats stats;

  bool reached(NodeId v) const { return labels[v].reached(); }
  Seconds arrival(NodeId v) const { return labels[v].arrival; }
  // Nodes from source to v; empty if v is unreached.
  std::vector<NodeId> path_to(const class RoadNetwork& net, NodeId v) const;
  std::vector<LinkId> links_to(const RoadNetwork& net, NodeId v) const;
};

enum class TieBreakMode { None, ShortestLane, LongestLane };

/// Output of the labeling phase: first-assignment labels and the origin list
/// (all labeled nodes in label order) that seeds the correcting phase.
struct LabelingResult {
  std::vector<Label> labels;
  std::vector<NodeId> origin;
  RunStats stats;
};

/// Labeling phase. Best-first over the priority store, but a node keeps the
/// first label it is given: every reachable link is relaxed exactly once.
LabelingResult hdm_label(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0);

/// Correcting phase. Seeds the store with the origin list and runs
/// best-first relaxation until no link (u, v) has
/// d(u) + delta((u, v), d(u)) < d(v).
SearchTree correct(const RoadNetwork& net, const TravelCost& cost, LabelingResult labeled, NodeId source, Seconds t0);

/// Labeling followed by correcting, plus optional tie-break of parents.
SearchTree run_dca(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0,
                   TieBreakMode tie_break = TieBreakMode::None);

/// Among in-links (u, v) reaching v at exactly d(v), the one with the
/// smallest (ShortestLane) or largest (LongestLane) length, lowest id on ties.
/// Returns the current parent for TieBreakMode::None or a singleton set.
std::optional<LinkId> tie_break_parent(const RoadNetwork& net, const TravelCost& cost, const SearchTree& tree,
                                       NodeId node, TieBreakMode mode);

/// Hop depth of every reached node (source = 0); -1 for unreached.
std::vector<std::int32_t> tree_depths(const SearchTree& tree, const RoadNetwork& net);

}  // namespace tdroute
