#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "parkroute/network.hpp"

namespace parkroute {

/// kappa_s(nu) = -nu * L_max / C_max. Throws ConfigError when C_max is zero.
double parking_term(double availability, double max_length, double max_capacity);

/// W_G = alpha * length + (1 - alpha) * parking_term.
inline double combined_weight(double alpha, double length, double parking) {
  return alpha * length + (1.0 - alpha) * parking;
}

/// Combined distance/parking weight for one network's normalisation constants.
class WeightModel {
 public:
  WeightModel(double alpha, double max_length, double max_capacity);
  static WeightModel for_network(const RoadNetwork& net, double alpha);

  double alpha() const { return alpha_; }
  double max_length() const { return max_length_; }
  double max_capacity() const { return max_capacity_; }

  double weight(double length, double availability) const {
    return combined_weight(alpha_, length, parking_term(availability, max_length_, max_capacity_));
  }

 private:
  double alpha_;
  double max_length_;
  double max_capacity_;
};

struct WeightedArc {
  std::size_t tail = 0;
  std::size_t head = 0;
  double weight = 0.0;
  /// Tie-break order among equal-weight routes; lower wins.
  EdgeId key = 0;
};

struct WeightedGraph {
  std::size_t node_count = 0;
  std::vector<WeightedArc> arcs;
};

/// Junction graph weighted by W_G at full capacity, without feasibility checks.
WeightedGraph static_weights(const RoadNetwork& net, double alpha);

/// As static_weights, but throws InfeasibleAlpha if the result has a negative cycle.
WeightedGraph static_graph(const RoadNetwork& net, double alpha);

/// Bellman-Ford from a virtual source. Zero-weight cycles are not negative.
bool has_negative_cycle(const WeightedGraph& graph);

/// Smallest alpha on {0, step, 2*step, ..., 1} whose static graph has no
/// negative cycle. Feasibility is monotone in alpha, so the grid is bisected.
double find_alpha_min(const RoadNetwork& net, double grid_step = 0.01);

/// Single-destination minimum-weight routes.
struct RouteTree {
  std::size_t destination = 0;
  /// Route weight to the destination; +inf where unreachable.
  std::vector<double> cost;
  /// Arc index (into WeightedGraph::arcs) of the first hop; empty at the
  /// destination and at unreachable nodes.
  std::vector<std::optional<std::size_t>> next_arc;

  bool reachable(std::size_t node) const;
};

/**
 * Negative-weight-safe single-destination routes (Bellman-Ford relaxation
 * toward the destination). Among equal-weight first hops the arc with the
 * lowest key wins, provided following it still reaches the destination.
 * Precondition: no negative cycle.
 */
RouteTree shortest_routes_to(const WeightedGraph& graph, std::size_t destination);

}  // namespace parkroute
