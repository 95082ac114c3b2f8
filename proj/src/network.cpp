#include "tdroute/network.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "tdroute/error.hpp"

namespace tdroute {

namespace {

void build_csr(std::size_t n, const std::vector<Link>& links, bool outgoing,
               std::vector<std::uint32_t>& begin, std::vector<LinkId>& ids) {
  begin.assign(n + 1, 0);
  for (const auto& l : links) ++begin[(outgoing ? l.from : l.to) + 1];
  for (std::size_t v = 0; v < n; ++v) begin[v + 1] += begin[v];
  ids.resize(links.size());
  std::vector<std::uint32_t> cursor(begin.begin(), begin.end() - 1);
  for (const auto& l : links) ids[cursor[outgoing ? l.from : l.to]++] = l.id;
}

}  // namespace

RoadNetwork::RoadNetwork(std::size_t node_count, std::vector<Link> links, std::uint32_t grid_side)
    : node_count_(node_count), grid_side_(grid_side), links_(std::move(links)) {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.id != i) throw InvalidInstance("link id " + std::to_string(l.id) + " at position " + std::to_string(i));
    if (l.from >= node_count_ || l.to >= node_count_) {
      throw InvalidInstance("link " + std::to_string(l.id) + " has an endpoint out of range");
    }
    if (l.from == l.to) throw InvalidInstance("link " + std::to_string(l.id) + " is a self loop");
    if (l.length_m <= 0) throw InvalidInstance("link " + std::to_string(l.id) + " has non-positive length");
  }
  build_csr(node_count_, links_, true, out_begin_, out_ids_);
  build_csr(node_count_, links_, false, in_begin_, in_ids_);

  for (NodeId v = 0; v < node_count_; ++v) {
    auto out = out_links(v);
    for (std::size_t a = 0; a < out.size(); ++a) {
      for (std::size_t b = a + 1; b < out.size(); ++b) {
        if (links_[out[a]].to == links_[out[b]].to) {
          throw InvalidInstance("duplicate link " + std::to_string(v) + "->" + std::to_string(links_[out[a]].to));
        }
      }
    }
  }
  for (const Link& l : links_) {
    const LinkId inverse = find_link(l.to, l.from);
    if (inverse != kNoLink && links_[inverse].length_m != l.length_m) {
      throw InvalidInstance("lane " + std::to_string(l.from) + "<->" + std::to_string(l.to) +
                            " has inverse links of different length");
    }
  }
}

LinkId RoadNetwork::find_link(NodeId from, NodeId to) const {
  for (LinkId id : out_links(from)) {
    if (links_[id].to == to) return id;
  }
  return kNoLink;
}

RoadNetwork generate_grid(std::uint32_t rows, std::uint32_t cols, std::uint64_t seed) {
  if (rows < 2 || cols < 2) {
    throw InvalidInstance("grid sides must be at least 2, got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  constexpr auto grades = length_grades();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grades.size() - 1);

  std::vector<Link> links;
  links.reserve(2ull * (2ull * rows * cols - rows - cols));
  auto add_lane = [&](NodeId a, NodeId b) {
    const Meters length = grades[pick(rng)];
    links.push_back({static_cast<LinkId>(links.size()), a, b, length});
    links.push_back({static_cast<LinkId>(links.size()), b, a, length});
  };
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) add_lane(grid_node(cols, r, c), grid_node(cols, r, c + 1));
      if (r + 1 < rows) add_lane(grid_node(cols, r, c), grid_node(cols, r + 1, c));
    }
  }
  // Only square grids carry a side; corner and perimeter helpers assume one.
  return RoadNetwork(static_cast<std::size_t>(rows) * cols, std::move(links), rows == cols ? rows : 0);
}

RoadNetwork generate_grid(std::uint32_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidInstance("grid side must be at least 2, got " + std::to_string(k));
  return generate_grid(k, k, seed);
}

std::vector<NodeId> grid_corners(std::uint32_t k) {
  const NodeId n = k * k;
  return {0, k - 1, n - k, n - 1};
}

std::vector<NodeId> grid_perimeter(std::uint32_t k) {
  std::vector<NodeId> nodes;
  nodes.reserve(4 * (k - 1));
  for (std::uint32_t c = 0; c + 1 < k; ++c) nodes.push_back(grid_node(k, 0, c));
  for (std::uint32_t r = 0; r + 1 < k; ++r) nodes.push_back(grid_node(k, r, k - 1));
  for (std::uint32_t c = k - 1; c > 0; --c) nodes.push_back(grid_node(k, k - 1, c));
  for (std::uint32_t r = k - 1; r > 0; --r) nodes.push_back(grid_node(k, r, 0));
  return nodes;
}

void write_network(std::ostream& out, const RoadNetwork& net) {
  out << "grid " << net.grid_side() << ' ' << net.node_count() << ' ' << net.link_count() << '\n';
  for (const Link& l : net.links()) {
    out << l.id << ' ' << l.from << ' ' << l.to << ' ' << l.length_m << '\n';
  }
}

RoadNetwork read_network(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](const char* expecting) {
    if (!std::getline(in, line)) throw ParseError(line_no + 1, std::string("unexpected end of file, expected ") + expecting);
    ++line_no;
  };

  next_line("header");
  std::istringstream header(line);
  std::string tag;
  long long k = -1, n = -1, e = -1;
  if (!(header >> tag >> k >> n >> e) || tag != "grid" || k < 0 || n < 0 || e < 0) {
    throw ParseError(line_no, "malformed header, expected `grid k n E`");
  }

  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(e));
  for (long long i = 0; i < e; ++i) {
    next_line("link line");
    std::istringstream row(line);
    long long id, from, to, length;
    std::string extra;
    if (!(row >> id >> from >> to >> length) || (row >> extra)) {
      throw ParseError(line_no, "malformed link line, expected `link_id from to length_m`");
    }
    if (id != i || from < 0 || to < 0 || from >= n || to >= n || length <= 0) {
      throw ParseError(line_no, "invalid link values");
    }
    links.push_back({static_cast<LinkId>(id), static_cast<NodeId>(from), static_cast<NodeId>(to), length});
  }
  try {
    return RoadNetwork(static_cast<std::size_t>(n), std::move(links), static_cast<std::uint32_t>(k));
  } catch (const InvalidInstance& err) {
    throw ParseError(line_no, err.what());
  }
}

void save_network(const RoadNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_network(out, net);
  if (!out) throw Error("failed writing " + path.string());
}

RoadNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_network(in);
}

}  // namespace tdroute
