#pragma once

#include <cstdint>
#include <vector>

#include "socialfilter/social_graph.hpp"

namespace socialfilter {

/// A node's view V_i: the owner plus the peers whose reports and trust
/// updates it considers, with the pre-trusted subset called out.
struct ViewSet {
  NodeId owner = 0;
  std::vector<NodeId> members;      // sorted, owner included
  std::vector<NodeId> pre_trusted;  // subset of members
  std::vector<std::uint64_t> mask;  // membership bitset over node ids

  bool contains(NodeId v) const {
    const std::size_t word = v >> 6;
    return word < mask.size() && ((mask[word] >> (v & 63)) & 1u);
  }

  void rebuild_mask(std::uint32_t n) {
    mask.assign((n + 63) / 64, 0);
    for (const NodeId v : members) mask[v >> 6] |= 1ull << (v & 63);
  }
};

}  // namespace socialfilter
