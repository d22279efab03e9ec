#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace socialfilter {

using NodeId = std::uint32_t;

enum class SybilTopology { kClique, kRing, kSmallWorld };

/// A group of fake identities wired to the honest graph through a small,
/// controlled number of attack edges.
struct SybilRegionSpec {
  NodeId attacker = 0;          // honest node the adversary controls
  std::uint32_t num_sybils = 0;
  std::uint32_t attack_edges = 1;
  SybilTopology internal_topology = SybilTopology::kClique;
};

/// Undirected social graph over node admins. Nodes are dense indices
/// [0, n). Each directed orientation of an edge may carry a social-trust
/// tag st_ij in [0, 1]; untagged orientations read as unset.
///
/// Once built, the topology is immutable; only social-trust tags mutate
/// (single writer). Reads are safe from any number of threads.
class SocialGraph {
 public:
  SocialGraph() = default;

  /// Builds from an explicit symmetric edge list. Self-loops are rejected,
  /// duplicates collapse. Node count is max(n_hint, 1 + max index).
  static SocialGraph from_edges(std::uint32_t n_hint,
                                const std::vector<std::pair<NodeId, NodeId>>& edges);

  /// Parses the line-oriented "u v" format. Lines starting with '#' are
  /// comments, except "# social_trust i j v" which restores trust tags.
  static SocialGraph load_edge_list(std::istream& in);
  static SocialGraph load_file(const std::string& path);

  /// Writes the same format, trust tags included; load/save round-trips.
  void save_edge_list(std::ostream& out) const;
  void save_file(const std::string& path) const;

  /// Connected Watts-Strogatz graph: ring lattice of even degree k, each
  /// lattice edge rewired with probability beta. Components left behind by
  /// rewiring are rejoined by single bridge edges.
  static SocialGraph generate_small_world(std::uint32_t n, std::uint32_t k, double beta,
                                          std::uint64_t seed);

  std::uint32_t node_count() const { return n_; }
  std::uint64_t edge_count() const { return nbrs_.size() / 2; }

  std::uint32_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {nbrs_.data() + offsets_[u], nbrs_.data() + offsets_[u + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const;

  /// Position of x within u's sorted neighbor list; u32 max when absent.
  std::uint32_t neighbor_slot(NodeId u, NodeId x) const;

  void set_social_trust(NodeId i, NodeId j, double st);
  std::optional<double> social_trust(NodeId i, NodeId j) const;
  double social_trust_or(NodeId i, NodeId j, double fallback) const;

  /// Every undirected edge once, as (u, v) with u < v, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  void build(std::uint32_t n, std::vector<std::pair<NodeId, NodeId>> edge_list);
  static std::uint64_t directed_key(NodeId i, NodeId j) {
    return (static_cast<std::uint64_t>(i) << 32) | j;
  }

  std::uint32_t n_ = 0;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> nbrs_;
  std::unordered_map<std::uint64_t, double> social_trust_;
};

/// Appends spec.num_sybils new nodes with the requested internal topology and
/// exactly spec.attack_edges edges into the honest region (the first one at
/// the attacker). Honest-honest edges are untouched; sybil ids start at
/// g.node_count().
SocialGraph attach_sybil_region(const SocialGraph& g, const SybilRegionSpec& spec,
                                std::uint64_t seed);

}  // namespace socialfilter
