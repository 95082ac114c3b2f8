#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tdroute/coverage.hpp"
#include "tdroute/error.hpp"

namespace tdroute {

NodeId HotZone::local(NodeId global) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), global);
  if (it == nodes.end() || *it != global) throw ContractViolation("node " + std::to_string(global) + " not in zone");
  return static_cast<NodeId>(it - nodes.begin());
}

bool HotZone::contains(NodeId global) const { return std::binary_search(nodes.begin(), nodes.end(), global); }

std::size_t default_zone_cap(std::size_t node_count) {
  return static_cast<std::size_t>(8.0 * std::sqrt(static_cast<double>(node_count)));
}

HotZone make_zone(const RoadNetwork& net, std::vector<NodeId> nodes, NodeId s, NodeId t, Seconds window_a,
                  Seconds window_b) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  HotZone zone;
  zone.source = s;
  zone.target = t;
  zone.window_a = window_a;
  zone.window_b = window_b;
  zone.nodes = std::move(nodes);
  for (NodeId v : zone.nodes) {
    if (v >= net.node_count()) throw ContractViolation("zone node " + std::to_string(v) + " out of range");
  }
  if (!zone.contains(s) || !zone.contains(t)) throw NoZone("zone must contain both endpoints");

  std::vector<Link> links;
  for (NodeId v : zone.nodes) {
    for (LinkId id : net.out_links(v)) {
      const Link& link = net.link(id);
      if (!zone.contains(link.to)) continue;
      links.push_back({static_cast<LinkId>(links.size()), zone.local(link.from), zone.local(link.to), link.length_m});
      zone.induced_links.push_back(id);
    }
  }
  zone.network = RoadNetwork(zone.nodes.size(), std::move(links));
  return zone;
}

HotZone extract_zone(const RoadNetwork& net, const std::vector<SearchTree>& trees, NodeId s, NodeId t,
                     std::size_t size_cap, Seconds window_pad) {
  std::vector<bool> in_zone(net.node_count(), false);
  std::vector<NodeId> members;
  Seconds first = kUnreached, last = 0;
  for (const SearchTree& tree : trees) {
    if (tree.source != s) throw ContractViolation("zone trees must be rooted at the zone source");
    if (!tree.reached(t)) continue;
    first = std::min(first, tree.t0);
    last = std::max(last, tree.t0);
    for (NodeId v : tree.path_to(net, t)) {
      if (!in_zone[v]) {
        in_zone[v] = true;
        members.push_back(v);
      }
    }
  }
  if (members.empty()) throw NoZone("no sampled tree reaches " + std::to_string(t) + " from " + std::to_string(s));
  if (members.size() > size_cap) {
    throw NoZone("path union of " + std::to_string(members.size()) + " nodes exceeds zone cap " +
                 std::to_string(size_cap));
  }

  // Halo rings over the undirected neighbourhood, in breadth-first order.
  std::deque<NodeId> frontier(members.begin(), members.end());
  while (!frontier.empty() && members.size() < size_cap) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    auto visit = [&](NodeId w) {
      if (in_zone[w] || members.size() >= size_cap) return;
      in_zone[w] = true;
      members.push_back(w);
      frontier.push_back(w);
    };
    for (LinkId id : net.out_links(u)) visit(net.link(id).to);
    for (LinkId id : net.in_links(u)) visit(net.link(id).from);
  }
  return make_zone(net, std::move(members), s, t, std::max<Seconds>(0, first - window_pad), last + window_pad);
}

ZoneRoute zone_query(const HotZone& zone, const TimeTableBinding& binding, const ApfConfig& cfg, NodeId s, NodeId t,
                     Seconds t0) {
  if (t0 < zone.window_a || t0 > zone.window_b) {
    throw ContractViolation("departure " + std::to_string(t0) + " outside zone window [" +
                            std::to_string(zone.window_a) + ", " + std::to_string(zone.window_b) + "]");
  }
  if (!zone.contains(s) || !zone.contains(t)) throw ZoneMiss("endpoint outside zone");
  const TravelCost cost(binding, cfg, zone.induced_links);
  const NodeId ls = zone.local(s), lt = zone.local(t);
  const SearchTree tree = run_dca(zone.network, cost, ls, t0);
  if (!tree.reached(lt)) throw ZoneMiss("target " + std::to_string(t) + " unreachable inside zone");
  ZoneRoute route;
  route.arrival = tree.arrival(lt);
  for (NodeId v : tree.path_to(zone.network, lt)) route.path.push_back(zone.nodes[v]);
  return route;
}

namespace {

std::vector<Seconds> departure_grid(Seconds t_a, Seconds t_b, Seconds step) {
  if (t_a > t_b) throw ConfigError("empty departure window");
  if (step < 1) throw ConfigError("departure step must be at least 1 second");
  std::vector<Seconds> grid;
  for (Seconds t = t_a; t <= t_b; t += step) grid.push_back(t);
  return grid;
}

std::vector<Seconds> bop_grid(const HotZone& zone, NodeId s, NodeId t, Seconds t_a, Seconds t_b, Seconds step) {
  auto grid = departure_grid(t_a, t_b, step);
  if (t_a < zone.window_a || t_b > zone.window_b) {
    throw ContractViolation("BOP window exceeds the zone's validity window");
  }
  if (!zone.contains(s) || !zone.contains(t)) throw NoSolution("endpoint outside zone");
  return grid;
}

constexpr Seconds kMissed = -1;

BopResult pick_best(const std::vector<Seconds>& grid, const std::vector<Seconds>& deltas) {
  BopResult best;
  best.trials = grid.size();
  bool found = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (deltas[i] == kMissed) {
      ++best.misses;
      continue;
    }
    if (!found || deltas[i] < best.best_delta) {
      best.best_t0 = grid[i];
      best.best_delta = deltas[i];
      found = true;
    }
  }
  if (!found) throw NoSolution("every departure in the window missed the zone");
  return best;
}

Seconds trial(const HotZone& zone, const TimeTableBinding& binding, const ApfConfig& cfg, NodeId s, NodeId t,
              Seconds t0) {
  try {
    return zone_query(zone, binding, cfg, s, t, t0).arrival - t0;
  } catch (const ZoneMiss&) {
    return kMissed;
  }
}

}  // namespace

BopResult solve_bop_serial(const HotZone& zone, const TimeTableBinding& binding, const ApfConfig& cfg, NodeId s,
                           NodeId t, Seconds t_a, Seconds t_b, Seconds step) {
  const auto grid = bop_grid(zone, s, t, t_a, t_b, step);
  std::vector<Seconds> deltas(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) deltas[i] = trial(zone, binding, cfg, s, t, grid[i]);
  return pick_best(grid, deltas);
}

BopResult solve_bop(const HotZone& zone, const TimeTableBinding& binding, const ApfConfig& cfg, NodeId s, NodeId t,
                    Seconds t_a, Seconds t_b, Seconds step) {
  const auto grid = bop_grid(zone, s, t, t_a, t_b, step);
  std::vector<Seconds> deltas(grid.size());
  const auto count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) deltas[i] = trial(zone, binding, cfg, s, t, grid[i]);
  return pick_best(grid, deltas);
}

void write_zone(std::ostream& out, const HotZone& zone) {
  out << "zone " << zone.nodes.size() << ' ' << zone.source << ' ' << zone.target << ' ' << zone.window_a << ' '
      << zone.window_b << '\n';
  for (std::size_t i = 0; i < zone.nodes.size(); ++i) out << (i ? " " : "") << zone.nodes[i];
  out << '\n';
  for (std::size_t i = 0; i < zone.induced_links.size(); ++i) out << (i ? " " : "") << zone.induced_links[i];
  out << '\n';
}

HotZone read_zone(std::istream& in, const RoadNetwork& net) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "unexpected end of file, expected header");
  std::istringstream header(line);
  std::string tag;
  long long size = -1, s = -1, t = -1, a = -1, b = -1;
  if (!(header >> tag >> size >> s >> t >> a >> b) || tag != "zone" || size < 1 || s < 0 || t < 0 || a < 0 ||
      b < a) {
    throw ParseError(1, "malformed header, expected `zone |Z| s t window_a window_b`");
  }
  std::vector<NodeId> nodes;
  if (!std::getline(in, line)) throw ParseError(2, "missing node line");
  {
    std::istringstream row(line);
    long long v;
    while (row >> v) {
      if (v < 0 || static_cast<std::size_t>(v) >= net.node_count()) throw ParseError(2, "zone node out of range");
      nodes.push_back(static_cast<NodeId>(v));
    }
    if (!row.eof()) throw ParseError(2, "malformed node id");
  }
  if (nodes.size() != static_cast<std::size_t>(size)) throw ParseError(2, "node count differs from header");
  std::vector<LinkId> links;
  if (std::getline(in, line)) {
    std::istringstream row(line);
    long long id;
    while (row >> id) links.push_back(static_cast<LinkId>(id));
    if (!row.eof()) throw ParseError(3, "malformed link id");
  }
  HotZone zone;
  try {
    zone = make_zone(net, std::move(nodes), static_cast<NodeId>(s), static_cast<NodeId>(t), a, b);
  } catch (const Error& err) {
    throw ParseError(2, err.what());
  }
  if (zone.induced_links != links) throw ParseError(3, "induced links do not match the network");
  return zone;
}

void save_zone(const HotZone& zone, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_zone(out, zone);
}

HotZone load_zone(const std::filesystem::path& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_zone(in, net);
}

}  // namespace tdroute
