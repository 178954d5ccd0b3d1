#include "parkroute/mdp.hpp"

#include <algorithm>
#include <ostream>

#include "parkroute/errors.hpp"
#include "parkroute/text.hpp"

namespace parkroute {

Fhmdp::Fhmdp(std::vector<std::vector<StateId>> successors, std::size_t horizon)
    : successors_(std::move(successors)), horizon_(horizon) {
  if (successors_.empty()) throw ConfigError("MDP needs at least one state");
  if (horizon_ == 0) throw ConfigError("horizon must be positive");
  offsets_.reserve(successors_.size() + 1);
  offsets_.push_back(0);
  for (const auto& row : successors_) {
    if (row.empty()) throw ConfigError("every state needs at least one action");
    for (StateId next : row) {
      if (next >= successors_.size()) throw ConfigError("transition to unknown state");
    }
    max_actions_ = std::max(max_actions_, row.size());
    offsets_.push_back(offsets_.back() + row.size());
  }
}

StateId RoadMdp::state_of(EdgeId id) const {
  auto it = state_by_edge.find(id);
  if (it == state_by_edge.end()) throw ConfigError("edge id " + std::to_string(id) + " not in MDP");
  return it->second;
}

RoadMdp build_mdp(const RoadNetwork& net, EdgeId destination, const MdpOptions& options) {
  if (!net.find_edge(destination)) {
    throw ConfigError("destination edge " + std::to_string(destination) + " not in network");
  }
  MergedNetwork merged = [&] {
    if (options.merge_chains) {
      const EdgeId keep[] = {destination};
      return merge_chains(net, keep);
    }
    std::vector<std::vector<EdgeId>> singletons;
    for (const RoadEdge& e : net.edges()) singletons.push_back({e.id});
    return MergedNetwork{net, std::move(singletons)};
  }();
  const RoadNetwork& g = merged.network;
  const std::size_t n = g.edge_count();

  std::unordered_map<EdgeId, StateId> by_edge;
  for (StateId s = 0; s < n; ++s) {
    for (EdgeId id : merged.constituents[s]) by_edge.emplace(id, s);
  }
  const StateId goal = by_edge.at(destination);

  std::vector<std::vector<StateId>> successors(n);
  std::vector<StateKind> kind(n, StateKind::Road);
  for (StateId s = 0; s < n; ++s) {
    if (s == goal) {
      successors[s] = {s};
      kind[s] = StateKind::Destination;
      continue;
    }
    for (std::size_t next : g.out_edges(g.edge(s).head)) {
      if (options.forbid_u_turns && g.is_u_turn(s, next)) continue;
      successors[s].push_back(next);
    }
    if (successors[s].empty()) {
      successors[s] = {s};
      kind[s] = StateKind::DeadEnd;
    }
  }

  return RoadMdp{g, std::move(merged.constituents), Fhmdp(std::move(successors), options.horizon),
                 goal, std::move(kind), std::move(by_edge)};
}

Solution backward_induction(const RewardTable& rewards, const Fhmdp& mdp) {
  const std::size_t S = mdp.state_count();
  const std::size_t H = mdp.horizon();
  Solution sol{Policy(S, H), ValueTable(H + 1, std::vector<double>(S, 0.0))};
  for (std::size_t t = H; t-- > 0;) {
    const auto& next = sol.values[t + 1];
    for (StateId s = 0; s < S; ++s) {
      ActionIndex best = 0;
      double best_q = rewards[s][0] + next[mdp.successor(s, 0)];
      for (ActionIndex a = 1; a < mdp.action_count(s); ++a) {
        const double q = rewards[s][a] + next[mdp.successor(s, a)];
        if (q > best_q) {
          best_q = q;
          best = a;
        }
      }
      sol.policy.set(s, t, best);
      sol.values[t][s] = best_q;
    }
  }
  return sol;
}

ValueTable evaluate_policy(const Policy& policy, const RewardTable& rewards, const Fhmdp& mdp) {
  const std::size_t S = mdp.state_count();
  const std::size_t H = mdp.horizon();
  ValueTable v(H + 1, std::vector<double>(S, 0.0));
  for (std::size_t t = H; t-- > 0;) {
    for (StateId s = 0; s < S; ++s) {
      const ActionIndex a = policy.at(s, t);
      v[t][s] = rewards[s][a] + v[t + 1][mdp.successor(s, a)];
    }
  }
  return v;
}

double value_of_policy(const Policy& policy, const RewardTable& rewards, const Fhmdp& mdp,
                       std::span<const double> initial) {
  if (initial.size() != mdp.state_count()) throw ConfigError("initial distribution size mismatch");
  const ValueTable v = evaluate_policy(policy, rewards, mdp);
  double u = 0.0;
  for (StateId s = 0; s < mdp.state_count(); ++s) u += initial[s] * v[0][s];
  return u;
}

void dump_mdp(const RoadMdp& road, std::ostream& out) {
  const RoadNetwork& g = road.states;
  out << "states " << road.mdp.state_count() << " horizon " << road.mdp.horizon()
      << " destination " << road.destination << '\n';
  for (StateId s = 0; s < road.mdp.state_count(); ++s) {
    const RoadEdge& e = g.edge(s);
    out << s << " edge " << e.id << " " << g.node_name(e.tail) << "->" << g.node_name(e.head)
        << " len " << format_fixed(e.length_m, 1) << " cap " << e.capacity;
    if (road.kind[s] == StateKind::Destination) out << " [destination]";
    if (road.kind[s] == StateKind::DeadEnd) out << " [dead-end]";
    out << " ->";
    for (StateId next : road.mdp.successors(s)) out << ' ' << next;
    out << '\n';
  }
}

}  // namespace parkroute
