#pragma once

#include <optional>
#include <vector>

#include "tdroute/apf.hpp"
#include "tdroute/dca.hpp"
#include "tdroute/network.hpp"

namespace tdroute::oracle {

/// Textbook time-dependent Dijkstra with a lazy-deletion binary heap.
/// Exact for FIFO costs. Only labels and parents are filled.
SearchTree td_dijkstra(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0);

/// Earliest arrival at every node over all simple paths of at most
/// `hop_bound` links, by exhaustive depth-first enumeration. Nodes no path
/// reaches hold kUnreached. Intended for networks of a dozen nodes.
std::vector<Seconds> brute_force_arrivals(const RoadNetwork& net, const TravelCost& cost, NodeId source, Seconds t0,
                                          std::size_t hop_bound);

/// As above for one target. Throws NoPath if nothing reaches it.
Seconds brute_force_best_arrival(const RoadNetwork& net, const TravelCost& cost, NodeId source, NodeId target,
                                 Seconds t0, std::size_t hop_bound);

inline constexpr std::size_t kBruteForceMaxNodes = 12;

}  // namespace tdroute::oracle
