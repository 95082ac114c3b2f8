#include "tdroute/coverage.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <string>


#include "tdroute/error.hpp"

namespace tdroute {

namespace {

class PairBitmap {
 public:
  explicit PairBitmap(std::size_t n) : n_(n), words_((n * n + 63) / 64, 0) {}

  void set(NodeId s, NodeId t) {
    const std::size_t bit = static_cast<std::size_t>(s) * n_ + t;
    words_[bit / 64] |= std::uint64_t{1} << (bit % 64);
  }
  void merge(const PairBitmap& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  }
  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

void mark_tree(const SearchTree& tree, const RoadNetwork& net, PairBitmap& pairs) {
  for (NodeId v = 0; v < tree.labels.size(); ++v) {
    if (v == tree.source || !tree.reached(v)) continue;
    NodeId a = v;
    while (a != tree.source) {
      a = net.link(tree.labels[a].parent).from;
      pairs.set(a, v);
    }
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

CoverageReport finish(const RoadNetwork& net, const PairBitmap& pairs, std::vector<double> wall_ms) {
  CoverageReport report;
  report.sources_used = wall_ms.size();
  report.st_pairs_covered = pairs.count();
  const double n = static_cast<double>(net.node_count());
  report.fraction = n < 2 ? 0.0 : static_cast<double>(report.st_pairs_covered) / (n * (n - 1));
  report.wall_ms = std::move(wall_ms);
  return report;
}

}  // namespace

std::uint64_t count_st_pairs(const SearchTree& tree, const RoadNetwork& net) {
  std::uint64_t pairs = 0;
  for (auto d : tree_depths(tree, net)) {
    if (d > 0) pairs += static_cast<std::uint64_t>(d);
  }
  return pairs;
}

std::uint64_t estimate_st_pairs(std::uint32_t k) {
  if (k < 2) throw InvalidInstance("grid side must be at least 2");
  const std::uint64_t side = k;
  return side * side * side;
}

std::vector<NodeId> resolve_sources(const RoadNetwork& net, const SourceSet& set) {
  auto need_grid = [&] {
    if (net.grid_side() < 2) throw ConfigError("corner and perimeter sources need a grid instance");
  };
  switch (set.mode) {
    case SourceMode::Corners:
      need_grid();
      return grid_corners(net.grid_side());
    case SourceMode::Perimeter:
      need_grid();
      return grid_perimeter(net.grid_side());
    case SourceMode::All: {
      std::vector<NodeId> all(net.node_count());
      for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
      return all;
    }
    case SourceMode::Explicit:
      for (NodeId v : set.explicit_nodes) {
        if (v >= net.node_count()) throw ConfigError("source " + std::to_string(v) + " out of range");
      }
      return set.explicit_nodes;
  }
  return {};
}

CoverageReport run_coverage_serial(const RoadNetwork& net, const TravelCost& cost, const SourceSet& sources,
                                   Seconds t0) {
  const auto nodes = resolve_sources(net, sources);
  PairBitmap pairs(net.node_count());
  std::vector<double> wall_ms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const SearchTree tree = run_dca(net, cost, nodes[i], t0);
    mark_tree(tree, net, pairs);
    wall_ms[i] = elapsed_ms(start);
  }
  return finish(net, pairs, std::move(wall_ms));
}

CoverageReport run_coverage(const RoadNetwork& net, const TravelCost& cost, const SourceSet& sources, Seconds t0) {
  const auto nodes = resolve_sources(net, sources);
  PairBitmap pairs(net.node_count());
  std::vector<double> wall_ms(nodes.size());
  const auto count = static_cast<std::int64_t>(nodes.size());

#pragma omp parallel
  {
    PairBitmap local(net.node_count());
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto start = std::chrono::steady_clock::now();
      const SearchTree tree = run_dca(net, cost, nodes[i], t0);
      mark_tree(tree, net, local);
      wall_ms[i] = elapsed_ms(start);
    }
#pragma omp critical(tdroute_coverage_merge)
    pairs.merge(local);
  }
  return finish(net, pairs, std::move(wall_ms));
}

}  // namespace tdroute
