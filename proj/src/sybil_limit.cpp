#include "socialfilter/sybil_limit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <unordered_set>

#include "socialfilter/errors.hpp"
#include "socialfilter/rng.hpp"

namespace socialfilter {

SybilLimitParams SybilLimitParams::resolved(const SocialGraph& g) const {
  SybilLimitParams p = *this;
  if (p.r == 0) {
    p.r = static_cast<std::uint32_t>(
        std::ceil(std::sqrt(static_cast<double>(std::max<std::uint64_t>(1, g.edge_count())))));
  }
  if (p.w == 0) {
    p.w = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(
               std::ceil(std::log2(static_cast<double>(std::max<std::uint32_t>(2, g.node_count()))))));
  }
  if (p.l < 1 || p.r < 1 || p.w < 1) throw ConfigError("sybil-limit params must be >= 1");
  return p;
}

RoutingTables::RoutingTables(const SocialGraph& g, std::uint32_t r, std::uint64_t seed)
    : g_(&g), r_(r), seed_(seed) {
  if (r < 1) throw ConfigError("routing tables require r >= 1");
}

std::vector<std::uint32_t> RoutingTables::permutation(std::uint32_t instance, NodeId node) const {
  const std::uint32_t deg = g_->degree(node);
  std::vector<std::uint32_t> perm(deg);
  for (std::uint32_t i = 0; i < deg; ++i) perm[i] = i;
  Rng rng = Rng(seed_).fork(0x7AB1E5ull).fork(instance).fork(node);
  for (std::uint32_t i = deg; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  return perm;
}

NodeId RoutingTables::step(std::uint32_t instance, NodeId prev, NodeId cur) const {
  const std::uint32_t slot = g_->neighbor_slot(cur, prev);
  if (slot == UINT32_MAX) throw DomainError("route step over a non-edge");
  const auto perm = permutation(instance, cur);
  return g_->neighbors(cur)[perm[slot]];
}

NodeId RoutingTables::step_back(std::uint32_t instance, NodeId cur, NodeId next) const {
  const std::uint32_t out_slot = g_->neighbor_slot(cur, next);
  if (out_slot == UINT32_MAX) throw DomainError("route step over a non-edge");
  const auto perm = permutation(instance, cur);
  for (std::uint32_t in_slot = 0; in_slot < perm.size(); ++in_slot) {
    if (perm[in_slot] == out_slot) return g_->neighbors(cur)[in_slot];
  }
  throw DomainError("permutation is not a bijection");  // unreachable
}

Tail random_route(const RoutingTables& tables, std::uint32_t instance, NodeId start,
                  NodeId first_hop, std::uint32_t w) {
  const SocialGraph& g = tables.graph();
  if (!g.has_edge(start, first_hop)) throw DomainError("first_hop is not adjacent to start");
  if (instance >= tables.instance_count()) throw DomainError("routing instance out of range");
  if (w < 1) throw DomainError("route length must be >= 1");

  NodeId prev = start;
  NodeId cur = first_hop;
  for (std::uint32_t step = 1; step < w; ++step) {
    const NodeId next = tables.step(instance, prev, cur);
    prev = cur;
    cur = next;
  }
  return Tail{prev, cur};
}

namespace {

// One tail per reserved instance; the first hop is redrawn per instance.
void collect_tails(const RoutingTables& tables, NodeId node, std::uint32_t first_instance,
                   std::uint32_t r, std::uint32_t w, std::uint64_t seed, bool verifier_side,
                   std::vector<std::uint64_t>& out) {
  out.clear();
  const SocialGraph& g = tables.graph();
  const std::uint32_t deg = g.degree(node);
  if (deg == 0) return;  // isolated: no routes, no tails
  Rng hop_rng = Rng(seed).fork(verifier_side ? 0xF1A5Full : 0x5E1Full).fork(node);
  for (std::uint32_t i = 0; i < r; ++i) {
    const NodeId first_hop = g.neighbors(node)[hop_rng.below(deg)];
    out.push_back(random_route(tables, first_instance + i, node, first_hop, w).undirected());
  }
}

}  // namespace

IdentityResult compute_identity_uniqueness(const SocialGraph& g, const SybilLimitParams& params) {
  SybilLimitParams p = params.resolved(g);
  const std::uint32_t n = g.node_count();
  if (p.l > n) {
    std::cerr << "sybil-limit: clamping l=" << p.l << " to node count " << n << "\n";
    p.l = n;
  }

  const RoutingTables tables(g, p.r, p.seed);
  Rng verifier_rng = Rng(p.seed).fork(0xCEEDull);
  std::vector<NodeId> verifiers = verifier_rng.sample_distinct(n, p.l);
  std::sort(verifiers.begin(), verifiers.end());

  // Verifier tails live in hash sets; suspects stream through one at a time.
  std::vector<std::unordered_set<std::uint64_t>> verifier_tails(verifiers.size());
  std::vector<std::uint64_t> tails;
  for (std::size_t vi = 0; vi < verifiers.size(); ++vi) {
    collect_tails(tables, verifiers[vi], p.r, p.r, p.w, p.seed, true, tails);
    verifier_tails[vi].insert(tails.begin(), tails.end());
  }

  IdentityResult result;
  result.params = p;
  result.verifiers = verifiers;
  result.scores.resize(n);
  for (NodeId s = 0; s < n; ++s) {
    collect_tails(tables, s, 0, p.r, p.w, p.seed, false, tails);
    std::uint32_t eligible = 0;
    std::uint32_t accepting = 0;
    for (std::size_t vi = 0; vi < verifiers.size(); ++vi) {
      if (verifiers[vi] == s) continue;  // self-verification is vacuous
      ++eligible;
      for (const std::uint64_t t : tails) {
        if (verifier_tails[vi].count(t)) {
          ++accepting;
          break;
        }
      }
    }
    result.scores[s] = IdentityScore{s, eligible == 0 ? 0.0 : double(accepting) / eligible};
  }
  return result;
}

void write_scores_csv(const IdentityResult& result, std::ostream& out) {
  out << "node_id,id_score\n";
  char buf[32];
  for (const auto& s : result.scores) {
    std::snprintf(buf, sizeof(buf), "%.9f", s.id);
    out << s.node << ',' << buf << '\n';
  }
}

}  // namespace socialfilter
