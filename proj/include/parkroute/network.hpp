#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace parkroute {

using EdgeId = std::int64_t;

/// A directed road link. `tail` and `head` index into the node list.
struct RoadEdge {
  EdgeId id = 0;
  std::size_t tail = 0;
  std::size_t head = 0;
  double length_m = 0.0;
  std::uint32_t capacity = 0;
};

/// One line of the edge-list file, before node names are resolved.
struct EdgeRecord {
  EdgeId id = 0;
  std::string tail;
  std::string head;
  double length_m = 0.0;
  std::uint32_t capacity = 0;
};

/**
 * Directed road graph. Every vertex is a junction and every edge a road link
 * carrying its length and its roadside parking capacity.
 *
 * Immutable after construction. The constructor enforces positive lengths,
 * distinct edge ids, no self-loops and at least one edge with parking, so
 * `max_capacity()` is always positive.
 */
class RoadNetwork {
 public:
  RoadNetwork(std::vector<std::string> node_names, std::vector<RoadEdge> edges);

  static RoadNetwork from_records(const std::vector<EdgeRecord>& records);

  std::size_t node_count() const { return node_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  const RoadEdge& edge(std::size_t index) const { return edges_.at(index); }
  const std::string& node_name(std::size_t node) const { return node_names_.at(node); }

  std::optional<std::size_t> find_node(std::string_view name) const;
  std::optional<std::size_t> find_edge(EdgeId id) const;
  /// Index of the edge with this id; throws ConfigError when absent.
  std::size_t edge_index(EdgeId id) const;

  std::span<const std::size_t> out_edges(std::size_t node) const { return out_.at(node); }
  std::span<const std::size_t> in_edges(std::size_t node) const { return in_.at(node); }

  /// L_max: longest edge in meters.
  double max_length() const { return max_length_; }
  /// C_max: largest edge parking capacity.
  std::uint32_t max_capacity() const { return max_capacity_; }

  /// True when `to` leaves the head of `from` and returns to its tail.
  bool is_u_turn(std::size_t from, std::size_t to) const;

 private:
  std::vector<std::string> node_names_;
  std::vector<RoadEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::unordered_map<EdgeId, std::size_t> edge_by_id_;
  std::unordered_map<std::string, std::size_t> node_by_name_;
  double max_length_ = 0.0;
  std::uint32_t max_capacity_ = 0;
};

// Edge-list format: `edge_id,tail,head,length_m,capacity` per line, `#` comments.
RoadNetwork read_edge_list(std::istream& in);
RoadNetwork load_edge_list(const std::filesystem::path& path);
void write_edge_list(const RoadNetwork& net, std::ostream& out);
void save_edge_list(const RoadNetwork& net, const std::filesystem::path& path);

/// Rectangular grid with two-way links between 4-neighbours.
struct GridSpec {
  std::size_t rows = 8;
  std::size_t cols = 8;
  double edge_length_m = 100.0;
  /// Each edge draws its capacity uniformly from this list.
  std::vector<std::uint32_t> capacity_choices{0, 5, 10};
  std::uint64_t seed = 1;
};

/// Node `r_c` for row r, column c; edge ids are assigned 0, 1, ... in row-major
/// node order, neighbours visited east, south, west, north.
RoadNetwork make_grid(const GridSpec& spec);

/// Grid node index for (row, col).
inline std::size_t grid_node(const GridSpec& spec, std::size_t row, std::size_t col) {
  return row * spec.cols + col;
}

struct MergedNetwork {
  RoadNetwork network;
  /// For each edge of `network`, the original edge ids it is made of, in order.
  std::vector<std::vector<EdgeId>> constituents;
};

/**
 * Joins unbranched chains: consecutive edges u->v, v->w merge whenever v has
 * in-degree 1 and out-degree 1. The merged edge keeps the first constituent's
 * id and sums length and capacity. Edges listed in `keep` are never merged.
 */
MergedNetwork merge_chains(const RoadNetwork& net, std::span<const EdgeId> keep = {});

}  // namespace parkroute
