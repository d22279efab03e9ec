#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "socialfilter/errors.hpp"
#include "socialfilter/social_graph.hpp"

using namespace socialfilter;

TEST_CASE("edge list parsing builds the listed symmetric graph") {
  std::istringstream in("0 1\n1 2\n");
  const auto g = SocialGraph::load_edge_list(in);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("self-loops and malformed lines are rejected with line numbers") {
  std::istringstream loop("0 0\n");
  CHECK_THROWS_WITH_AS(SocialGraph::load_edge_list(loop), doctest::Contains("line 1"), ParseError);

  std::istringstream junk("0 1\nnot numbers\n");
  try {
    SocialGraph::load_edge_list(junk);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("comments are skipped and node count covers isolated indices") {
  std::istringstream in("# a comment\n0 1\n\n4 1\n");
  const auto g = SocialGraph::load_edge_list(in);
  CHECK(g.node_count() == 5);  // nodes 2 and 3 exist but are isolated
  CHECK(g.degree(2) == 0);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("a 442,772-line edge list loads completely") {
  // Same scale as a 50k-node social-network sample with 442,772 links.
  std::ostringstream text;
  const std::uint32_t n = 50000;
  std::uint32_t emitted = 0;
  for (std::uint32_t stride = 1; emitted < 442772; ++stride) {
    for (std::uint32_t u = 0; u < n && emitted < 442772; ++u, ++emitted) {
      text << u << ' ' << (u + stride) % n << '\n';
    }
  }
  std::istringstream in(text.str());
  const auto g = SocialGraph::load_edge_list(in);
  CHECK(g.edge_count() == 442772);
  CHECK(g.node_count() == n);
}

TEST_CASE("social trust is directed, range-checked, and edge-checked") {
  const auto g = [] {
    std::istringstream in("0 1\n1 2\n");
    return SocialGraph::load_edge_list(in);
  }();
  auto graph = g;
  graph.set_social_trust(0, 1, 0.8);
  CHECK(graph.social_trust(0, 1) == doctest::Approx(0.8));
  CHECK_FALSE(graph.social_trust(1, 0).has_value());
  CHECK_THROWS_AS(graph.set_social_trust(0, 1, 1.5), DomainError);
  CHECK_THROWS_AS(graph.set_social_trust(0, 5, 0.5), DomainError);
}

TEST_CASE("serialization round-trips edges and trust tags byte-identically") {
  auto g = SocialGraph::generate_small_world(40, 4, 0.2, 9);
  g.set_social_trust(0, 1, 0.25);
  g.set_social_trust(1, 0, 0.75);
  std::ostringstream first;
  g.save_edge_list(first);
  std::istringstream in(first.str());
  const auto reloaded = SocialGraph::load_edge_list(in);
  std::ostringstream second;
  reloaded.save_edge_list(second);
  CHECK(first.str() == second.str());
  CHECK(reloaded.social_trust(1, 0) == doctest::Approx(0.75));
}

TEST_CASE("beta=0 small world is the ring lattice") {
  const auto g = SocialGraph::generate_small_world(10, 4, 0.0, 123);
  for (NodeId u = 0; u < 10; ++u) CHECK(g.degree(u) == 4);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(0, 2));
  CHECK_FALSE(g.has_edge(0, 3));
}

TEST_CASE("small-world generation is deterministic per seed") {
  const auto a = SocialGraph::generate_small_world(1000, 16, 0.1, 7);
  const auto b = SocialGraph::generate_small_world(1000, 16, 0.1, 7);
  CHECK(a.edges() == b.edges());
  const auto c = SocialGraph::generate_small_world(1000, 16, 0.1, 8);
  CHECK(a.edges() != c.edges());
}

TEST_CASE("rewiring shortens mean path length versus the lattice") {
  const auto lattice = SocialGraph::generate_small_world(1000, 16, 0.0, 7);
  const auto rewired = SocialGraph::generate_small_world(1000, 16, 0.1, 7);
  const auto to_adj = [](const SocialGraph& g) {
    std::vector<std::vector<std::uint32_t>> adj(g.node_count());
    for (const auto& [u, v] : g.edges()) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return adj;
  };
  CHECK(oracles::mean_shortest_path(to_adj(rewired)) <
        oracles::mean_shortest_path(to_adj(lattice)));
}

TEST_CASE("generation rejects invalid parameters") {
  CHECK_THROWS_AS(SocialGraph::generate_small_world(10, 3, 0.1, 1), ConfigError);
  CHECK_THROWS_AS(SocialGraph::generate_small_world(4, 4, 0.1, 1), ConfigError);
  CHECK_THROWS_AS(SocialGraph::generate_small_world(10, 4, 1.5, 1), ConfigError);
}

TEST_CASE("heavily rewired graphs stay connected") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto g = SocialGraph::generate_small_world(300, 4, 1.0, seed);
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (const NodeId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    CHECK(count == g.node_count());
  }
}

namespace {

std::uint32_t cross_edges(const SocialGraph& g, NodeId first_sybil) {
  std::uint32_t crossing = 0;
  for (const auto& [u, v] : g.edges()) {
    if ((u < first_sybil) != (v < first_sybil)) ++crossing;
  }
  return crossing;
}

}  // namespace

TEST_CASE("sybil attachment adds the region with the exact cut") {
  const auto honest = SocialGraph::generate_small_world(10, 4, 0.0, 5);
  SybilRegionSpec spec;
  spec.attacker = 3;
  spec.num_sybils = 5;
  spec.attack_edges = 1;
  const auto g = attach_sybil_region(honest, spec, 11);
  CHECK(g.node_count() == 15);
  CHECK(cross_edges(g, 10) == 1);
  // clique internally
  CHECK(g.has_edge(10, 14));

  // Honest-honest edges are untouched.
  for (const auto& [u, v] : honest.edges()) CHECK(g.has_edge(u, v));
  std::uint32_t honest_edges = 0;
  for (const auto& [u, v] : g.edges()) {
    if (u < 10 && v < 10) ++honest_edges;
  }
  CHECK(honest_edges == honest.edge_count());
}

TEST_CASE("region min-cut equals the requested attack edges") {
  const auto honest = SocialGraph::generate_small_world(10, 4, 0.0, 5);
  SybilRegionSpec spec;
  spec.attacker = 3;
  spec.num_sybils = 5;
  spec.attack_edges = 3;
  const auto g = attach_sybil_region(honest, spec, 11);
  CHECK(cross_edges(g, 10) == 3);

  // Min-cut oracle: contract both regions into super nodes s and t.
  const std::uint32_t s = g.node_count();
  const std::uint32_t t = g.node_count() + 1;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges = g.edges();
  for (NodeId u = 0; u < 10; ++u) {
    for (std::uint32_t i = 0; i < 8; ++i) edges.emplace_back(s, u);  // uncuttable
  }
  for (NodeId u = 10; u < 15; ++u) {
    for (std::uint32_t i = 0; i < 8; ++i) edges.emplace_back(t, u);
  }
  CHECK(oracles::unit_max_flow(t + 1, edges, s, t) == 3);
}

TEST_CASE("sybil attachment validates its spec") {
  const auto honest = SocialGraph::generate_small_world(10, 4, 0.0, 5);
  SybilRegionSpec spec;
  spec.attacker = 3;
  spec.num_sybils = 0;
  CHECK_THROWS_AS(attach_sybil_region(honest, spec, 1), ConfigError);
  spec.num_sybils = 2;
  spec.attack_edges = 0;
  CHECK_THROWS_AS(attach_sybil_region(honest, spec, 1), ConfigError);
  spec.attack_edges = 999;
  CHECK_THROWS_AS(attach_sybil_region(honest, spec, 1), ConfigError);
  spec.attack_edges = 1;
  spec.attacker = 99;
  CHECK_THROWS_AS(attach_sybil_region(honest, spec, 1), ConfigError);
}

TEST_CASE("neighbor lists are symmetric") {
  const auto g = SocialGraph::generate_small_world(200, 6, 0.3, 17);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const NodeId v : g.neighbors(u)) {
      CHECK(g.has_edge(v, u));
    }
  }
}
