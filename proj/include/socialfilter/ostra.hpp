#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "socialfilter/social_graph.hpp"

namespace socialfilter {

using OstraTokenId = std::uint64_t;

enum class OstraVerdict : std::uint8_t { kWanted, kUnwanted };

/// Per-link credit state for the Ostra baseline. Each adjacent user of each
/// social link holds a balance B constrained to [L, U]; issuing a token
/// tightens the bounds along the path (sender side L+1, receiver side U-1)
/// until the receiver classifies, which restores them and, for unwanted
/// traffic, transfers one credit forward per link.
class OstraCredit {
 public:
  /// credit_bound is the symmetric |L| = |U| range applied to every side.
  OstraCredit(const SocialGraph& g, int credit_bound);

  /// Shortest hop-count path whose links can all absorb one more token in
  /// the traversal direction; nullopt when none exists (email refused).
  std::optional<std::vector<NodeId>> find_social_path(NodeId sender, NodeId receiver) const;

  /// Applies the bound adjustments along the path. On any violation, rolls
  /// back what was applied and refuses (returns nullopt).
  std::optional<OstraTokenId> issue_token(const std::vector<NodeId>& path, double now);

  /// Receiver classification: undoes the pending adjustments; unwanted also
  /// moves one credit from each link's first node to its second.
  void classify(OstraTokenId token, OstraVerdict verdict);

  std::size_t outstanding_tokens() const { return tokens_.size(); }

  /// u's balance on the link {u, v}.
  int balance(NodeId u, NodeId v) const;
  /// u's current (pending-adjusted) bounds on the link {u, v}.
  std::pair<int, int> bounds(NodeId u, NodeId v) const;

 private:
  struct Side {
    std::int32_t balance = 0;
    std::int32_t lower = 0;  // current L, pending adjustments included
    std::int32_t upper = 0;  // current U, pending adjustments included
  };
  struct DirectedLink {
    std::uint32_t from_side;  // index into sides_
    std::uint32_t to_side;
  };

  std::uint32_t side_index(NodeId u, NodeId v) const;  // u's side of {u,v}
  bool can_traverse(std::uint32_t from_side, std::uint32_t to_side) const {
    return sides_[from_side].balance >= sides_[from_side].lower + 1 &&
           sides_[to_side].balance <= sides_[to_side].upper - 1;
  }

  const SocialGraph* g_;
  std::vector<Side> sides_;  // 2 per undirected edge, CSR-slot addressed
  std::vector<std::uint32_t> slot_base_;
  std::unordered_map<OstraTokenId, std::vector<DirectedLink>> tokens_;
  OstraTokenId next_token_ = 1;

  mutable std::vector<std::uint32_t> bfs_parent_;
  mutable std::vector<std::uint32_t> bfs_stamp_;
  mutable std::uint32_t stamp_ = 0;
};

}  // namespace socialfilter
