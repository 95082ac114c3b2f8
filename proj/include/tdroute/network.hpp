#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tdroute/types.hpp"

namespace tdroute {

struct Link {
  LinkId id = 0;
  NodeId from = 0;
  NodeId to = 0;
  Meters length_m = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// The 46 link length grades, 250 m to 2500 m in steps of 50 m.
inline constexpr std::size_t kLengthGradeCount = 46;
constexpr std::array<Meters, kLengthGradeCount> length_grades() {
  std::array<Meters, kLengthGradeCount> grades{};
  for (std::size_t k = 0; k < kLengthGradeCount; ++k) {
    grades[k] = 250 + 50 * static_cast<Meters>(k);
  }
  return grades;
}

/// Fixed topology: nodes, directed links and their lengths. Immutable once
/// built, so one instance can back any number of concurrent searches.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  /// Builds adjacency from `links`. Link ids must equal their position.
  /// Throws InvalidInstance on self loops, non-positive lengths, duplicate
  /// (from, to) pairs or out-of-range endpoints.
  RoadNetwork(std::size_t node_count, std::vector<Link> links, std::uint32_t grid_side = 0);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t link_count() const noexcept { return links_.size(); }
  // k for a k-by-k grid instance, 0 otherwise.
  std::uint32_t grid_side() const noexcept { return grid_side_; }

  const Link& link(LinkId id) const { return links_[id]; }
  std::span<const Link> links() const noexcept { return links_; }
  std::span<const LinkId> out_links(NodeId v) const {
    return {out_ids_.data() + out_begin_[v], out_ids_.data() + out_begin_[v + 1]};
  }
  std::span<const LinkId> in_links(NodeId v) const {
    return {in_ids_.data() + in_begin_[v], in_ids_.data() + in_begin_[v + 1]};
  }

  // The link from -> to, or kNoLink.
  LinkId find_link(NodeId from, NodeId to) const;

  friend bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
    return a.node_count_ == b.node_count_ && a.grid_side_ == b.grid_side_ && a.links_ == b.links_;
  }

 private:
  std::size_t node_count_ = 0;
  std::uint32_t grid_side_ = 0;
  std::vector<Link> links_;
  std::vector<std::uint32_t> out_begin_, in_begin_;
  std::vector<LinkId> out_ids_, in_ids_;
};

/// k-by-k grid; node (r, c) is r*k + c. Each neighbouring pair is joined by a
/// lane of two inverse links sharing one length drawn from length_grades().
RoadNetwork generate_grid(std::uint32_t k, std::uint64_t seed);
// rows-by-cols grid, node (r, c) = r*cols + c. grid_side() is 0 unless square.
RoadNetwork generate_grid(std::uint32_t rows, std::uint32_t cols, std::uint64_t seed);

inline NodeId grid_node(std::uint32_t k, std::uint32_t row, std::uint32_t col) {
  return row * k + col;
}

// Corner ids 0, k-1, n-k, n-1.
std::vector<NodeId> grid_corners(std::uint32_t k);
// The 4(k-1) boundary nodes, clockwise from node 0.
std::vector<NodeId> grid_perimeter(std::uint32_t k);

void write_network(std::ostream& out, const RoadNetwork& net);
RoadNetwork read_network(std::istream& in);
void save_network(const RoadNetwork& net, const std::filesystem::path& path);
RoadNetwork load_network(const std::filesystem::path& path);

}  // namespace tdroute
