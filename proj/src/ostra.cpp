#include "socialfilter/ostra.hpp"

#include <algorithm>
#include <deque>

#include "socialfilter/errors.hpp"

namespace socialfilter {

OstraCredit::OstraCredit(const SocialGraph& g, int credit_bound) : g_(&g) {
  if (credit_bound < 1) throw ConfigError("ostra credit bound must be >= 1");
  const std::uint32_t n = g.node_count();
  slot_base_.resize(n + 1, 0);
  for (std::uint32_t u = 0; u < n; ++u) slot_base_[u + 1] = slot_base_[u] + g.degree(u);
  sides_.resize(slot_base_[n]);
  for (auto& s : sides_) {
    s.balance = 0;
    s.lower = -credit_bound;
    s.upper = credit_bound;
  }
  bfs_parent_.resize(n);
  bfs_stamp_.resize(n, 0);
}

std::uint32_t OstraCredit::side_index(NodeId u, NodeId v) const {
  const std::uint32_t slot = g_->neighbor_slot(u, v);
  if (slot == UINT32_MAX) throw DomainError("ostra link over a non-edge");
  return slot_base_[u] + slot;
}

std::optional<std::vector<NodeId>> OstraCredit::find_social_path(NodeId sender,
                                                                 NodeId receiver) const {
  const std::uint32_t n = g_->node_count();
  if (sender >= n || receiver >= n) return std::nullopt;
  if (sender == receiver) return std::vector<NodeId>{sender};

  ++stamp_;
  bfs_stamp_[sender] = stamp_;
  std::deque<NodeId> queue{sender};
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    const auto nbrs = g_->neighbors(u);
    for (std::uint32_t slot = 0; slot < nbrs.size(); ++slot) {
      const NodeId v = nbrs[slot];
      if (bfs_stamp_[v] == stamp_) continue;
      const std::uint32_t from_side = slot_base_[u] + slot;
      if (!can_traverse(from_side, side_index(v, u))) continue;
      bfs_stamp_[v] = stamp_;
      bfs_parent_[v] = u;
      if (v == receiver) {
        std::vector<NodeId> path{receiver};
        for (NodeId cur = receiver; cur != sender; cur = bfs_parent_[cur]) {
          path.push_back(bfs_parent_[cur]);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

std::optional<OstraTokenId> OstraCredit::issue_token(const std::vector<NodeId>& path,
                                                     double /*now*/) {
  std::vector<DirectedLink> applied;
  applied.reserve(path.size() > 0 ? path.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const DirectedLink link{side_index(path[i], path[i + 1]),
                            side_index(path[i + 1], path[i])};
    if (!can_traverse(link.from_side, link.to_side)) {
      for (auto it = applied.rbegin(); it != applied.rend(); ++it) {
        sides_[it->from_side].lower -= 1;
        sides_[it->to_side].upper += 1;
      }
      return std::nullopt;
    }
    sides_[link.from_side].lower += 1;
    sides_[link.to_side].upper -= 1;
    applied.push_back(link);
  }
  const OstraTokenId id = next_token_++;
  tokens_.emplace(id, std::move(applied));
  return id;
}

void OstraCredit::classify(OstraTokenId token, OstraVerdict verdict) {
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) throw DomainError("unknown ostra token");
  for (const auto& link : it->second) {
    sides_[link.from_side].lower -= 1;
    sides_[link.to_side].upper += 1;
    if (verdict == OstraVerdict::kUnwanted) {
      sides_[link.from_side].balance -= 1;
      sides_[link.to_side].balance += 1;
    }
  }
  tokens_.erase(it);
}

int OstraCredit::balance(NodeId u, NodeId v) const { return sides_[side_index(u, v)].balance; }

std::pair<int, int> OstraCredit::bounds(NodeId u, NodeId v) const {
  const Side& s = sides_[side_index(u, v)];
  return {s.lower, s.upper};
}

}  // namespace socialfilter
