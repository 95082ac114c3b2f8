#include "tdroute/oracle.hpp"

#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "tdroute/error.hpp"

namespace tdroute::oracle {

SearchTree td_dijkstra(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0) {
  if (source >= net.node_count()) throw ContractViolation("source out of range");
  SearchTree tree;
  tree.source = source;
  tree.t0 = t0;
  tree.labels.assign(net.node_count(), Label{});
  auto& labels = tree.labels;

  using Entry = std::pair<Seconds, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  labels[source] = {t0, kNoLink, LabelState::Labeled};
  heap.push({t0, source});
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (labels[u].state == LabelState::Settled || du != labels[u].arrival) continue;
    labels[u].state = LabelState::Settled;
    for (LinkId id : net.out_links(u)) {
      const Link& link = net.link(id);
      const ThroughTime tt = cost.evaluate(link, du);
      tree.stats.table_queries += tt.slot_queries;
      if (!tt.completed()) continue;
      const Seconds candidate = du + tt.delta;
      Label& lv = labels[link.to];
      if (lv.state == LabelState::Settled || candidate >= lv.arrival) continue;
      lv = {candidate, id, LabelState::Labeled};
      heap.push({candidate, link.to});
    }
  }
  return tree;
}

std::vector<Seconds> brute_force_arrivals(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0,
                                          std::size_t hop_bound) {
  if (net.node_count() > kBruteForceMaxNodes) {
    throw ContractViolation("brute force limited to " + std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  if (source >= net.node_count()) throw ContractViolation("source out of range");
  std::vector<Seconds> best(net.node_count(), kUnreached);
  std::vector<bool> on_path(net.node_count(), false);

  std::function<void(NodeId, Seconds, std::size_t)> walk = [&](NodeId u, Seconds at, std::size_t hops) {
    if (at < best[u]) best[u] = at;
    if (hops == hop_bound) return;
    on_path[u] = true;
    for (LinkId id : net.out_links(u)) {
      const Link& link = net.link(id);
      if (on_path[link.to]) continue;
      const ThroughTime tt = cost.evaluate(link, at);
      if (tt.completed()) walk(link.to, at + tt.delta, hops + 1);
    }
    on_path[u] = false;
  };
  walk(source, t0, 0);
  return best;
}

Seconds brute_force_best_arrival(const RoadNetwork& net, const TravelCost& cost, NodeId source, NodeId target,
                                 Seconds t0, std::size_t hop_bound) {
  if (target >= net.node_count()) throw ContractViolation("target out of range");
  const Seconds a = brute_force_arrivals(net, cost, source, t0, hop_bound)[target];
  if (a == kUnreached) throw NoPath("no path from " + std::to_string(source) + " to " + std::to_string(target));
  return a;
}

}  // namespace tdroute::oracle
