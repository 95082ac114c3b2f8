#include "tdroute/dca.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "tdroute/error.hpp"
#include "tdroute/priority_store.hpp"

namespace tdroute {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t nanos_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

// Accumulates store time (DC) and scan time (SC) separately; store calls made
// from inside a scan are charged to DC only.
class CostMeter {
 public:
  explicit CostMeter(RunStats& stats) : stats_(stats) {}

  template <class F>
  decltype(auto) store(F&& op) {
    const auto start = Clock::now();
    struct Charge {
      CostMeter& meter;
      Clock::time_point start;
      ~Charge() {
        const auto ns = nanos_since(start);
        meter.stats_.dc_nanos += ns;
        meter.nested_ += ns;
      }
    } charge{*this, start};
    return op();
  }

  void begin_scan() {
    nested_ = 0;
    scan_start_ = Clock::now();
  }
  void end_scan() { stats_.sc_nanos += nanos_since(scan_start_) - nested_; }

 private:
  RunStats& stats_;
  std::int64_t nested_ = 0;
  Clock::time_point scan_start_;
};

void check_source(const RoadNetwork& net, NodeId source, Seconds t0) {
  if (source >= net.node_count()) throw ContractViolation("source " + std::to_string(source) + " out of range");
  if (t0 < 0) throw ContractViolation("departure time must be non-negative");
}

}  // namespace

LabelingResult hdm_label(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0) {
  check_source(net, source, t0);
  const auto start = Clock::now();
  LabelingResult out;
  out.labels.assign(net.node_count(), Label{});
  out.origin.reserve(net.node_count());
  RunStats& stats = out.stats;
  CostMeter meter(stats);

  PriorityStore store(net.node_count());
  out.labels[source] = {t0, kNoLink, LabelState::Labeled};
  meter.store([&] { store.insert(source, t0); });

  std::vector<NodeId> group;
  while (!store.empty()) {
    meter.store([&] { return store.extract_min_group(group); });
    stats.extractions += group.size();
    for (NodeId u : group) {
      out.origin.push_back(u);
      const Seconds du = out.labels[u].arrival;
      meter.begin_scan();
      for (LinkId id : net.out_links(u)) {
        const Link& link = net.link(id);
        if (out.labels[link.to].reached()) continue;
        const ThroughTime tt = cost.evaluate(link, du);
        ++stats.relaxations;
        stats.table_queries += tt.slot_queries;
        if (!tt.completed()) {
          ++stats.interrupted;
          continue;
        }
        out.labels[link.to] = {du + tt.delta, id, LabelState::Labeled};
        meter.store([&] { store.insert(link.to, du + tt.delta); });
      }
      meter.end_scan();
    }
  }
  stats.hdm_nanos = nanos_since(start);
  return out;
}

SearchTree correct(const RoadNetwork& net, const TravelCost& cost, LabelingResult labeled, NodeId source,
                   Seconds t0) {
  check_source(net, source, t0);
  SearchTree tree;
  tree.source = source;
  tree.t0 = t0;
  tree.labels = std::move(labeled.labels);
  tree.stats = labeled.stats;
  RunStats& stats = tree.stats;
  CostMeter meter(stats);
  auto& labels = tree.labels;

  PriorityStore store(net.node_count());
  meter.store([&] {
    for (NodeId v : labeled.origin) store.insert(v, labels[v].arrival);
  });

  std::vector<NodeId> group;
  while (!store.empty()) {
    meter.store([&] { return store.extract_min_group(group); });
    stats.extractions += group.size();
    for (NodeId u : group) {
      labels[u].state = LabelState::Settled;
      const Seconds du = labels[u].arrival;
      meter.begin_scan();
      for (LinkId id : net.out_links(u)) {
        const Link& link = net.link(id);
        const ThroughTime tt = cost.evaluate(link, du);
        ++stats.relaxations;
        stats.table_queries += tt.slot_queries;
        if (!tt.completed()) {
          ++stats.interrupted;
          continue;
        }
        const NodeId v = link.to;
        const Seconds candidate = du + tt.delta;
        if (candidate >= labels[v].arrival) continue;
        labels[v].arrival = candidate;
        labels[v].parent = id;
        labels[v].state = LabelState::Labeled;
        ++stats.improvements;
        if (store.contains(v)) {
          meter.store([&] { store.decrease_key(v, candidate); });
          ++stats.decreases;
        } else {
          meter.store([&] { store.insert(v, candidate); });
        }
      }
      meter.end_scan();
    }
  }
  return tree;
}

SearchTree run_dca(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0,
                   TieBreakMode tie_break) {
  const auto start = Clock::now();
  SearchTree tree = correct(net, cost, hdm_label(net, cost, source, t0), source, t0);
  if (tie_break != TieBreakMode::None) {
    std::vector<LinkId> parents(net.node_count(), kNoLink);
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (v == source || !tree.reached(v)) continue;
      parents[v] = tie_break_parent(net, cost, tree, v, tie_break).value_or(tree.labels[v].parent);
    }
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (parents[v] != kNoLink) tree.labels[v].parent = parents[v];
    }
  }
  RunStats& stats = tree.stats;
  stats.total_nanos = nanos_since(start);
  stats.atq = net.link_count() == 0 ? 0.0
                                    : static_cast<double>(stats.table_queries) / static_cast<double>(net.link_count());
  std::uint64_t pairs = 0;
  for (auto d : tree_depths(tree, net)) {
    if (d > 0) pairs += static_cast<std::uint64_t>(d);
  }
  stats.st_pairs = pairs;
  return tree;
}

std::optional<LinkId> tie_break_parent(const RoadNetwork& net, const TravelCost& cost, const SearchTree& tree,
                                       NodeId node, TieBreakMode mode) {
  if (!tree.reached(node) || node == tree.source) return std::nullopt;
  const LinkId current = tree.labels[node].parent;
  if (mode == TieBreakMode::None) return current;
  const Seconds target = tree.labels[node].arrival;
  LinkId best = kNoLink;
  for (LinkId id : net.in_links(node)) {
    const Link& link = net.link(id);
    if (!tree.reached(link.from)) continue;
    const Seconds du = tree.labels[link.from].arrival;
    if (du >= target) continue;
    const ThroughTime tt = cost.evaluate(link, du);
    if (!tt.completed() || du + tt.delta != target) continue;
    if (best == kNoLink) {
      best = id;
      continue;
    }
    const Meters len = link.length_m, best_len = net.link(best).length_m;
    const bool better = mode == TieBreakMode::ShortestLane ? len < best_len : len > best_len;
    if (better || (len == best_len && id < best)) best = id;
  }
  return best == kNoLink ? current : best;
}

std::vector<std::int32_t> tree_depths(const SearchTree& tree, const RoadNetwork& net) {
  std::vector<std::int32_t> depth(tree.labels.size(), -1);
  std::vector<NodeId> chain;
  for (NodeId v = 0; v < tree.labels.size(); ++v) {
    if (!tree.reached(v) || depth[v] >= 0) continue;
    chain.clear();
    NodeId w = v;
    while (depth[w] < 0 && w != tree.source) {
      chain.push_back(w);
      const LinkId p = tree.labels[w].parent;
      if (p == kNoLink) throw ContractViolation("reached node " + std::to_string(w) + " has no parent");
      w = net.link(p).from;
      if (chain.size() > tree.labels.size()) throw ContractViolation("parent links contain a cycle");
    }
    if (w == tree.source) depth[w] = 0;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth[*it] = depth[w] + 1;
      w = *it;
    }
  }
  return depth;
}

std::vector<NodeId> SearchTree::path_to(const RoadNetwork& net, NodeId v) const {
  std::vector<NodeId> path;
  if (!reached(v)) return path;
  for (LinkId id : links_to(net, v)) path.push_back(net.link(id).from);
  path.push_back(v);
  return path;
}

std::vector<LinkId> SearchTree::links_to(const RoadNetwork& net, NodeId v) const {
  std::vector<LinkId> links;
  if (!reached(v)) return links;
  while (v != source) {
    const LinkId p = labels[v].parent;
    if (p == kNoLink || links.size() > labels.size()) throw ContractViolation("broken parent chain");
    links.push_back(p);
    v = net.link(p).from;
  }
  std::reverse(links.begin(), links.end());
  return links;
}

}  // namespace tdroute
