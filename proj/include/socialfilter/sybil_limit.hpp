#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "socialfilter/social_graph.hpp"

namespace socialfilter {

/// The final edge of a random route, ordered (penultimate, terminal).
struct Tail {
  NodeId penultimate = 0;
  NodeId terminal = 0;

  /// Orientation-free form used for intersection tests.
  std::uint64_t undirected() const {
    NodeId a = penultimate, b = terminal;
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
};

struct SybilLimitParams {
  std::uint32_t l = 32;  // verifier count
  std::uint32_t r = 0;   // routes / table instances per side; 0 = ceil(sqrt(m))
  std::uint32_t w = 0;   // route length; 0 = ceil(log2(n))
  std::uint64_t seed = 0;

  SybilLimitParams resolved(const SocialGraph& g) const;
};

/// 2r independent edge-permutation routing instances. Instances [0, r) are
/// reserved for suspect routes, [r, 2r) for verifier routes. Each instance
/// gives every node a uniform bijection of its incident-edge slots, derived
/// deterministically from (seed, instance, node) and materialized on demand,
/// so tables for large graphs cost no persistent memory.
class RoutingTables {
 public:
  RoutingTables(const SocialGraph& g, std::uint32_t r, std::uint64_t seed);

  std::uint32_t route_count() const { return r_; }
  std::uint32_t instance_count() const { return 2 * r_; }
  std::uint64_t seed() const { return seed_; }
  const SocialGraph& graph() const { return *g_; }

  /// The permutation for (instance, node): slot of the incoming edge ->
  /// slot of the outgoing edge, over node's sorted neighbor list.
  std::vector<std::uint32_t> permutation(std::uint32_t instance, NodeId node) const;

  /// Route step: entered cur over edge (prev, cur); returns the exit neighbor.
  NodeId step(std::uint32_t instance, NodeId prev, NodeId cur) const;

  /// Inverse step: exited cur toward next; returns the entry neighbor.
  NodeId step_back(std::uint32_t instance, NodeId cur, NodeId next) const;

 private:
  const SocialGraph* g_;
  std::uint32_t r_;
  std::uint64_t seed_;
};

/// Walks w edges from start, first hop fixed, the rest following the
/// instance's per-node permutations. Returns the w-th edge.
Tail random_route(const RoutingTables& tables, std::uint32_t instance, NodeId start,
                  NodeId first_hop, std::uint32_t w);

struct IdentityScore {
  NodeId node = 0;
  double id = 0.0;  // accepting fraction of eligible verifiers
};

struct IdentityResult {
  std::vector<IdentityScore> scores;  // indexed by node
  std::vector<NodeId> verifiers;
  SybilLimitParams params;  // fully resolved

  double score(NodeId v) const { return scores[v].id; }
};

/// Centralized SybilLimit-style scoring: draws verifier and suspect tails
/// over the reserved instances and scores each node by the fraction of
/// verifiers whose tail set intersects the suspect's (undirected compare,
/// pooled across instances). A verifier never verifies itself; its score is
/// normalized by the remaining verifiers.
IdentityResult compute_identity_uniqueness(const SocialGraph& g, const SybilLimitParams& params);

/// CSV export: "node_id,id_score" rows.
void write_scores_csv(const IdentityResult& result, std::ostream& out);

}  // namespace socialfilter
