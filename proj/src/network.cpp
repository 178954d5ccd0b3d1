#include "parkroute/network.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "parkroute/errors.hpp"
#include "parkroute/text.hpp"

namespace parkroute {

RoadNetwork::RoadNetwork(std::vector<std::string> node_names, std::vector<RoadEdge> edges)
    : node_names_(std::move(node_names)), edges_(std::move(edges)) {
  out_.resize(node_names_.size());
  in_.resize(node_names_.size());
  for (std::size_t n = 0; n < node_names_.size(); ++n) {
    if (!node_by_name_.emplace(node_names_[n], n).second) {
      throw ConfigError("duplicate node name '" + node_names_[n] + "'");
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const RoadEdge& e = edges_[i];
    if (e.tail >= node_names_.size() || e.head >= node_names_.size()) {
      throw ConfigError("edge " + std::to_string(e.id) + " references an unknown node");
    }
    if (e.tail == e.head) {
      throw ConfigError("edge " + std::to_string(e.id) + " is a self-loop");
    }
    if (!(e.length_m > 0.0)) {
      throw ConfigError("edge " + std::to_string(e.id) + " has non-positive length");
    }
    if (!edge_by_id_.emplace(e.id, i).second) {
      throw ConfigError("duplicate edge id " + std::to_string(e.id));
    }
    out_[e.tail].push_back(i);
    in_[e.head].push_back(i);
    max_length_ = std::max(max_length_, e.length_m);
    max_capacity_ = std::max(max_capacity_, e.capacity);
  }
  if (edges_.empty()) throw ConfigError("network has no edges");
  if (max_capacity_ == 0) throw ConfigError("network has no parking capacity on any edge");
}

RoadNetwork RoadNetwork::from_records(const std::vector<EdgeRecord>& records) {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  auto node = [&](const std::string& name) {
    auto [it, inserted] = index.emplace(name, names.size());
    if (inserted) names.push_back(name);
    return it->second;
  };
  std::vector<RoadEdge> edges;
  edges.reserve(records.size());
  for (const EdgeRecord& r : records) {
    const std::size_t tail = node(r.tail);
    const std::size_t head = node(r.head);
    edges.push_back(RoadEdge{r.id, tail, head, r.length_m, r.capacity});
  }
  return RoadNetwork(std::move(names), std::move(edges));
}

std::optional<std::size_t> RoadNetwork::find_node(std::string_view name) const {
  auto it = node_by_name_.find(std::string(name));
  if (it == node_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> RoadNetwork::find_edge(EdgeId id) const {
  auto it = edge_by_id_.find(id);
  if (it == edge_by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t RoadNetwork::edge_index(EdgeId id) const {
  auto found = find_edge(id);
  if (!found) throw ConfigError("edge id " + std::to_string(id) + " not in network");
  return *found;
}

bool RoadNetwork::is_u_turn(std::size_t from, std::size_t to) const {
  const RoadEdge& a = edges_.at(from);
  const RoadEdge& b = edges_.at(to);
  return a.head == b.tail && b.head == a.tail;
}

RoadNetwork read_edge_list(std::istream& in) {
  std::vector<EdgeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split(view, ',');
    if (fields.size() != 5) {
      throw ConfigError("edge list line " + std::to_string(line_no) + ": expected 5 columns");
    }
    if (records.empty() && trim(fields[0]) == "edge_id") continue;  // optional header row
    try {
      EdgeRecord r;
      r.id = parse_number<EdgeId>(fields[0]);
      r.tail = std::string(trim(fields[1]));
      r.head = std::string(trim(fields[2]));
      r.length_m = parse_number<double>(fields[3]);
      const double cap = parse_number<double>(fields[4]);
      if (cap < 0.0 || cap != static_cast<double>(static_cast<std::uint32_t>(cap))) {
        throw ConfigError("capacity must be a nonnegative integer");
      }
      r.capacity = static_cast<std::uint32_t>(cap);
      records.push_back(std::move(r));
    } catch (const ConfigError& e) {
      throw ConfigError("edge list line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return RoadNetwork::from_records(records);
}

RoadNetwork load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open network file " + path.string());
  return read_edge_list(in);
}

void write_edge_list(const RoadNetwork& net, std::ostream& out) {
  out << "# edge_id,tail,head,length_m,capacity\n";
  for (const RoadEdge& e : net.edges()) {
    out << e.id << ',' << net.node_name(e.tail) << ',' << net.node_name(e.head) << ','
        << format_fixed(e.length_m, 3) << ',' << e.capacity << '\n';
  }
}

void save_edge_list(const RoadNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write network file " + path.string());
  write_edge_list(net, out);
  if (!out) throw IoError("write failed for " + path.string());
}

RoadNetwork make_grid(const GridSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0 || spec.rows * spec.cols < 2) {
    throw ConfigError("grid needs at least two nodes");
  }
  if (spec.capacity_choices.empty()) throw ConfigError("grid capacity choices are empty");
  std::vector<std::string> names;
  names.reserve(spec.rows * spec.cols);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      names.push_back(std::to_string(r) + "_" + std::to_string(c));
    }
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<RoadEdge> edges;
  EdgeId next_id = 0;
  const int dr[] = {0, 1, 0, -1};
  const int dc[] = {1, 0, -1, 0};
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      for (int k = 0; k < 4; ++k) {
        const auto nr = static_cast<std::ptrdiff_t>(r) + dr[k];
        const auto nc = static_cast<std::ptrdiff_t>(c) + dc[k];
        if (nr < 0 || nc < 0 || nr >= static_cast<std::ptrdiff_t>(spec.rows) ||
            nc >= static_cast<std::ptrdiff_t>(spec.cols)) {
          continue;
        }
        const std::uint32_t cap = spec.capacity_choices[rng() % spec.capacity_choices.size()];
        edges.push_back(RoadEdge{next_id++, grid_node(spec, r, c),
                                 grid_node(spec, static_cast<std::size_t>(nr),
                                           static_cast<std::size_t>(nc)),
                                 spec.edge_length_m, cap});
      }
    }
  }
  return RoadNetwork(std::move(names), std::move(edges));
}

MergedNetwork merge_chains(const RoadNetwork& net, std::span<const EdgeId> keep) {
  const std::size_t m = net.edge_count();
  std::vector<bool> kept(m, false);
  for (EdgeId id : keep) kept[net.edge_index(id)] = true;

  auto pass_through = [&](std::size_t node) {
    return net.in_edges(node).size() == 1 && net.out_edges(node).size() == 1;
  };
  // successor[e] = the edge e joins into, if any.
  std::vector<std::optional<std::size_t>> successor(m);
  std::vector<bool> has_predecessor(m, false);
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t v = net.edge(e).head;
    if (kept[e] || !pass_through(v)) continue;
    const std::size_t next = net.out_edges(v).front();
    if (kept[next]) continue;
    successor[e] = next;
    has_predecessor[next] = true;
  }

  std::vector<RoadEdge> edges;
  std::vector<std::vector<EdgeId>> constituents;
  std::vector<bool> used(m, false);
  auto emit = [&](const std::vector<std::size_t>& chain) {
    RoadEdge merged = net.edge(chain.front());
    merged.head = net.edge(chain.back()).head;
    merged.length_m = 0.0;
    merged.capacity = 0;
    std::vector<EdgeId> ids;
    for (std::size_t e : chain) {
      merged.length_m += net.edge(e).length_m;
      merged.capacity += net.edge(e).capacity;
      ids.push_back(net.edge(e).id);
    }
    edges.push_back(merged);
    constituents.push_back(std::move(ids));
  };

  for (std::size_t start = 0; start < m; ++start) {
    if (used[start] || has_predecessor[start]) continue;
    std::vector<std::size_t> chain{start};
    used[start] = true;
    while (successor[chain.back()] && !used[*successor[chain.back()]]) {
      const std::size_t next = *successor[chain.back()];
      // Closing the chain onto its own tail would create a self-loop.
      if (net.edge(next).head == net.edge(chain.front()).tail) {
        emit(chain);
        chain.clear();
      }
      chain.push_back(next);
      used[next] = true;
    }
    emit(chain);
  }
  // Rings made only of pass-through nodes have no chain start; keep them as is.
  for (std::size_t e = 0; e < m; ++e) {
    if (!used[e]) emit({e});
  }

  std::vector<std::string> names;
  names.reserve(net.node_count());
  for (std::size_t n = 0; n < net.node_count(); ++n) names.push_back(net.node_name(n));
  return MergedNetwork{RoadNetwork(std::move(names), std::move(edges)), std::move(constituents)};
}

}  // namespace parkroute
