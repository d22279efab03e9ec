#include "socialfilter/social_graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "socialfilter/errors.hpp"
#include "socialfilter/rng.hpp"

namespace socialfilter {

namespace {

std::uint64_t undirected_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

void SocialGraph::build(std::uint32_t n, std::vector<std::pair<NodeId, NodeId>> edge_list) {
  for (auto& [u, v] : edge_list) {
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());

  n_ = n;
  offsets_.assign(n_ + 1, 0);
  for (const auto& [u, v] : edge_list) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::uint32_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];

  nbrs_.resize(edge_list.size() * 2);
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edge_list) {
    nbrs_[cursor[u]++] = v;
    nbrs_[cursor[v]++] = u;
  }
  for (std::uint32_t u = 0; u < n_; ++u) {
    std::sort(nbrs_.begin() + offsets_[u], nbrs_.begin() + offsets_[u + 1]);
  }
}

SocialGraph SocialGraph::from_edges(std::uint32_t n_hint,
                                    const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::uint32_t n = n_hint;
  for (const auto& [u, v] : edges) {
    if (u == v) throw DomainError("self-loop on node " + std::to_string(u));
    n = std::max({n, u + 1, v + 1});
  }
  SocialGraph g;
  g.build(n, edges);
  return g;
}

SocialGraph SocialGraph::load_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::tuple<NodeId, NodeId, double>> trust_tags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, tag;
      ls >> hash >> tag;
      if (tag == "social_trust") {
        NodeId i, j;
        double v;
        if (!(ls >> i >> j >> v)) {
          throw ParseError("malformed social_trust extension", lineno);
        }
        trust_tags.emplace_back(i, j, v);
      }
      continue;
    }
    long long u, v;
    if (!(ls >> u >> v) || u < 0 || v < 0) {
      throw ParseError("expected two non-negative integers", lineno);
    }
    if (u == v) throw ParseError("self-loop on node " + std::to_string(u), lineno);
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  SocialGraph g = from_edges(0, edges);
  for (const auto& [i, j, v] : trust_tags) g.set_social_trust(i, j, v);
  return g;
}

SocialGraph SocialGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  return load_edge_list(in);
}

void SocialGraph::save_edge_list(std::ostream& out) const {
  for (const auto& [u, v] : edges()) out << u << ' ' << v << '\n';
  std::vector<std::tuple<NodeId, NodeId, double>> tags;
  tags.reserve(social_trust_.size());
  for (const auto& [key, v] : social_trust_) {
    tags.emplace_back(static_cast<NodeId>(key >> 32), static_cast<NodeId>(key), v);
  }
  std::sort(tags.begin(), tags.end());
  char buf[64];
  for (const auto& [i, j, v] : tags) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << "# social_trust " << i << ' ' << j << ' ' << buf << '\n';
  }
}

void SocialGraph::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  save_edge_list(out);
}

bool SocialGraph::has_edge(NodeId u, NodeId v) const {
  if (u >= n_ || v >= n_) return false;
  return neighbor_slot(u, v) != UINT32_MAX;
}

std::uint32_t SocialGraph::neighbor_slot(NodeId u, NodeId x) const {
  const auto nb = neighbors(u);
  const auto it = std::lower_bound(nb.begin(), nb.end(), x);
  if (it == nb.end() || *it != x) return UINT32_MAX;
  return static_cast<std::uint32_t>(it - nb.begin());
}

void SocialGraph::set_social_trust(NodeId i, NodeId j, double st) {
  if (st < 0.0 || st > 1.0) {
    throw DomainError("social trust out of [0,1]: " + std::to_string(st));
  }
  if (!has_edge(i, j)) {
    throw DomainError("social trust on non-edge (" + std::to_string(i) + "," +
                      std::to_string(j) + ")");
  }
  social_trust_[directed_key(i, j)] = st;
}

std::optional<double> SocialGraph::social_trust(NodeId i, NodeId j) const {
  const auto it = social_trust_.find(directed_key(i, j));
  if (it == social_trust_.end()) return std::nullopt;
  return it->second;
}

double SocialGraph::social_trust_or(NodeId i, NodeId j, double fallback) const {
  const auto it = social_trust_.find(directed_key(i, j));
  return it == social_trust_.end() ? fallback : it->second;
}

std::vector<std::pair<NodeId, NodeId>> SocialGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < n_; ++u) {
    for (const NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

SocialGraph SocialGraph::generate_small_world(std::uint32_t n, std::uint32_t k, double beta,
                                              std::uint64_t seed) {
  if (k < 2 || k % 2 != 0) throw ConfigError("small-world k must be even and >= 2");
  if (n <= k) throw ConfigError("small-world requires n > k");
  if (beta < 0.0 || beta > 1.0) throw ConfigError("small-world beta must be in [0,1]");

  Rng rng = Rng(seed).fork(0x5757u);  // graph-generation stream
  std::unordered_set<std::uint64_t> edge_set;
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(n) * k / 2);

  const auto add = [&](NodeId u, NodeId v) {
    if (u == v) return false;
    if (!edge_set.insert(undirected_key(u, v)).second) return false;
    edges.emplace_back(u, v);
    return true;
  };

  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t j = 1; j <= k / 2; ++j) add(u, (u + j) % n);
  }

  // Rewire the far endpoint of each lattice edge with probability beta.
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!rng.chance(beta)) continue;
    const NodeId u = edges[e].first;
    NodeId w = edges[e].second;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const NodeId cand = static_cast<NodeId>(rng.below(n));
      if (cand == u || edge_set.count(undirected_key(u, cand))) continue;
      w = cand;
      break;
    }
    if (w != edges[e].second) {
      edge_set.erase(undirected_key(u, edges[e].second));
      edge_set.insert(undirected_key(u, w));
      edges[e].second = w;
    }
  }

  SocialGraph g;
  g.build(n, edges);

  // Rejoin any components split off by rewiring: one bridge per component,
  // from a random member to a random node of the main component.
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::vector<NodeId>> members;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const auto id = static_cast<std::int32_t>(members.size());
    members.emplace_back();
    stack.push_back(s);
    comp[s] = id;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      members[id].push_back(u);
      for (const NodeId v : g.neighbors(u)) {
        if (comp[v] < 0) {
          comp[v] = id;
          stack.push_back(v);
        }
      }
    }
  }
  if (members.size() > 1) {
    for (std::size_t c = 1; c < members.size(); ++c) {
      const NodeId a = members[0][rng.below(members[0].size())];
      const NodeId b = members[c][rng.below(members[c].size())];
      add(a, b);
    }
    g.build(n, edges);
  }
  return g;
}

SocialGraph attach_sybil_region(const SocialGraph& g, const SybilRegionSpec& spec,
                                std::uint64_t seed) {
  if (spec.num_sybils < 1) throw ConfigError("num_sybils must be >= 1");
  if (spec.attack_edges < 1) throw ConfigError("attack_edges must be >= 1");
  if (spec.attacker >= g.node_count()) throw ConfigError("sybil attacker not in graph");
  if (spec.attack_edges > g.node_count()) {
    throw ConfigError("attack_edges exceeds available honest endpoints");
  }

  Rng rng = Rng(seed).fork(0x5B1Lu);
  const NodeId base = g.node_count();
  const std::uint32_t s = spec.num_sybils;
  auto edges = g.edges();

  switch (spec.internal_topology) {
    case SybilTopology::kClique:
      for (std::uint32_t i = 0; i < s; ++i) {
        for (std::uint32_t j = i + 1; j < s; ++j) edges.emplace_back(base + i, base + j);
      }
      break;
    case SybilTopology::kRing:
      // Duplicate orientations collapse in from_edges, so s == 2 is fine.
      for (std::uint32_t i = 0; i + 1 < s || (s >= 3 && i < s); ++i) {
        edges.emplace_back(base + i, base + (i + 1) % s);
      }
      break;
    case SybilTopology::kSmallWorld: {
      std::uint32_t k = std::min<std::uint32_t>(6, s > 2 ? ((s - 1) / 2) * 2 : 2);
      if (k >= 2 && s > k) {
        const auto inner = SocialGraph::generate_small_world(s, k, 0.1, rng.next());
        for (const auto& [u, v] : inner.edges()) edges.emplace_back(base + u, base + v);
      } else {
        for (std::uint32_t i = 0; i < s; ++i) {
          for (std::uint32_t j = i + 1; j < s; ++j) edges.emplace_back(base + i, base + j);
        }
      }
      break;
    }
  }

  // Attack edge 1 lands on the attacker; the rest on distinct honest nodes.
  std::vector<NodeId> honest_targets{spec.attacker};
  std::vector<bool> used(g.node_count(), false);
  used[spec.attacker] = true;
  while (honest_targets.size() < spec.attack_edges) {
    const auto cand = static_cast<NodeId>(rng.below(g.node_count()));
    if (used[cand]) continue;
    used[cand] = true;
    honest_targets.push_back(cand);
  }
  for (const NodeId target : honest_targets) {
    edges.emplace_back(base + static_cast<NodeId>(rng.below(s)), target);
  }

  SocialGraph out = SocialGraph::from_edges(base + s, edges);
  for (const auto& [u, v] : g.edges()) {
    if (auto st = g.social_trust(u, v)) out.set_social_trust(u, v, *st);
    if (auto st = g.social_trust(v, u)) out.set_social_trust(v, u, *st);
  }
  return out;
}

}  // namespace socialfilter
