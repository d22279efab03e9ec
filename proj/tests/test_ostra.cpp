#include <doctest.h>

#include "socialfilter/errors.hpp"
#include "socialfilter/ostra.hpp"
#include "socialfilter/rng.hpp"
#include "socialfilter/social_graph.hpp"

using namespace socialfilter;

namespace {

SocialGraph chain(std::uint32_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return SocialGraph::from_edges(n, edges);
}

}  // namespace

TEST_CASE("adjacent friends route over the single link; strangers get none") {
  const auto g = SocialGraph::from_edges(4, {{0, 1}, {2, 3}});
  OstraCredit credit(g, 5);
  const auto path = credit.find_social_path(0, 1);
  REQUIRE(path.has_value());
  CHECK(*path == std::vector<NodeId>{0, 1});
  CHECK_FALSE(credit.find_social_path(0, 3).has_value());  // email refused
}

TEST_CASE("issuing and wanted classification round-trips the state") {
  const auto g = chain(3);
  OstraCredit credit(g, 5);
  const auto path = credit.find_social_path(0, 2);
  REQUIRE(path.has_value());
  const auto token = credit.issue_token(*path, 0.0);
  REQUIRE(token.has_value());
  CHECK(credit.bounds(0, 1) == std::pair<int, int>{-4, 5});  // sender side L raised
  CHECK(credit.bounds(1, 0) == std::pair<int, int>{-5, 4});  // receiver side U lowered
  credit.classify(*token, OstraVerdict::kWanted);
  CHECK(credit.bounds(0, 1) == std::pair<int, int>{-5, 5});
  CHECK(credit.bounds(1, 0) == std::pair<int, int>{-5, 5});
  CHECK(credit.balance(0, 1) == 0);
  CHECK(credit.balance(1, 2) == 0);
}

TEST_CASE("unwanted classification transfers one credit along every link") {
  const auto g = chain(3);
  OstraCredit credit(g, 5);
  const auto token = credit.issue_token({0, 1, 2}, 0.0);
  REQUIRE(token.has_value());
  credit.classify(*token, OstraVerdict::kUnwanted);
  CHECK(credit.balance(0, 1) == -1);
  CHECK(credit.balance(1, 0) == +1);
  CHECK(credit.balance(1, 2) == -1);
  CHECK(credit.balance(2, 1) == +1);
  // Bounds were restored.
  CHECK(credit.bounds(0, 1) == std::pair<int, int>{-5, 5});
}

TEST_CASE("a balance inside a shifted range is legal and spendable") {
  // Reproduces the 2 with bounds [-4, +5] state: one pending token plus two
  // credits received on the reverse direction.
  const auto g = chain(2);
  OstraCredit credit(g, 5);
  for (int i = 0; i < 2; ++i) {
    const auto t = credit.issue_token({1, 0}, 0.0);
    REQUIRE(t.has_value());
    credit.classify(*t, OstraVerdict::kUnwanted);  // transfers toward node 0
  }
  const auto pending = credit.issue_token({0, 1}, 0.0);
  REQUIRE(pending.has_value());
  CHECK(credit.balance(0, 1) == 2);
  CHECK(credit.bounds(0, 1) == std::pair<int, int>{-4, 5});
  const auto more = credit.issue_token({0, 1}, 0.0);
  CHECK(more.has_value());  // 2 >= -3 leaves room to spare
}

TEST_CASE("the sixth concurrent unclassified token is refused") {
  const auto g = chain(2);
  OstraCredit credit(g, 5);
  std::vector<OstraTokenId> tokens;
  for (int i = 0; i < 5; ++i) {
    const auto t = credit.issue_token({0, 1}, 0.0);
    REQUIRE(t.has_value());
    tokens.push_back(*t);
  }
  CHECK_FALSE(credit.issue_token({0, 1}, 0.0).has_value());
  CHECK_FALSE(credit.find_social_path(0, 1).has_value());
  // Classifying one as wanted frees a slot again.
  credit.classify(tokens.back(), OstraVerdict::kWanted);
  CHECK(credit.issue_token({0, 1}, 0.0).has_value());
}

TEST_CASE("five unwanted messages exhaust a direction for good") {
  const auto g = chain(2);
  OstraCredit credit(g, 5);
  for (int i = 0; i < 5; ++i) {
    const auto t = credit.issue_token({0, 1}, 0.0);
    REQUIRE(t.has_value());
    credit.classify(*t, OstraVerdict::kUnwanted);
  }
  CHECK(credit.balance(0, 1) == -5);  // pinned to L
  CHECK_FALSE(credit.issue_token({0, 1}, 0.0).has_value());
  CHECK_FALSE(credit.find_social_path(0, 1).has_value());
  // The reverse direction still works: node 1 accumulated credit.
  CHECK(credit.balance(1, 0) == 5);
  CHECK(credit.find_social_path(1, 0).has_value());
}

TEST_CASE("a refused multi-link issuance rolls back cleanly") {
  const auto g = chain(3);
  OstraCredit credit(g, 1);  // |L| = |U| = 1
  // Exhaust the far link 1-2 with one unwanted message.
  const auto t = credit.issue_token({1, 2}, 0.0);
  REQUIRE(t.has_value());
  credit.classify(*t, OstraVerdict::kUnwanted);
  CHECK(credit.balance(1, 2) == -1);
  // A 0 -> 2 token must fail on the second link and restore the first.
  CHECK_FALSE(credit.issue_token({0, 1, 2}, 0.0).has_value());
  CHECK(credit.bounds(0, 1) == std::pair<int, int>{-1, 1});
  CHECK(credit.bounds(1, 0) == std::pair<int, int>{-1, 1});
  CHECK_FALSE(credit.find_social_path(0, 2).has_value());  // every path exhausted
}

TEST_CASE("credit is conserved per link under any classification mix") {
  const auto g = SocialGraph::generate_small_world(24, 4, 0.2, 6);
  OstraCredit credit(g, 5);
  Rng rng(7);
  std::vector<OstraTokenId> outstanding;
  for (int step = 0; step < 400; ++step) {
    const auto s = static_cast<NodeId>(rng.below(24));
    auto r = static_cast<NodeId>(rng.below(24));
    if (r == s) r = (r + 1) % 24;
    if (const auto path = credit.find_social_path(s, r)) {
      if (const auto token = credit.issue_token(*path, 0.0)) outstanding.push_back(*token);
    }
    while (!outstanding.empty() && rng.chance(0.7)) {
      const auto token = outstanding.back();
      outstanding.pop_back();
      credit.classify(token, rng.chance(0.5) ? OstraVerdict::kUnwanted : OstraVerdict::kWanted);
    }
  }
  for (const auto& [u, v] : g.edges()) {
    CHECK(credit.balance(u, v) + credit.balance(v, u) == 0);  // zero-sum per link
  }
}

TEST_CASE("a pure spammer starves within its per-link budgets") {
  const auto g = chain(4);
  OstraCredit credit(g, 2);
  int delivered = 0;
  for (int attempt = 0; attempt < 50; ++attempt) {
    const auto path = credit.find_social_path(0, 3);
    if (!path) break;
    const auto token = credit.issue_token(*path, 0.0);
    if (!token) break;
    ++delivered;
    credit.classify(*token, OstraVerdict::kUnwanted);
  }
  // One outgoing link with |L| + |U| = 4 of absorbable transfers.
  CHECK(delivered <= 4);
  CHECK_FALSE(credit.find_social_path(0, 3).has_value());
}

TEST_CASE("an exhausted cut link blocks honest senders behind it") {
  // Barbell: clique {0,1,2} - bridge 2-3 - clique {3,4,5}; the spammer at 0
  // kills the bridge, which then refuses honest 1 -> 4 mail.
  const auto g = SocialGraph::from_edges(
      6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
  OstraCredit credit(g, 1);
  while (true) {
    const auto path = credit.find_social_path(0, 4);
    if (!path) break;
    const auto token = credit.issue_token(*path, 0.0);
    if (!token) break;
    credit.classify(*token, OstraVerdict::kUnwanted);
  }
  CHECK_FALSE(credit.find_social_path(1, 4).has_value());  // collateral damage
  CHECK(credit.find_social_path(1, 2).has_value());        // same side still fine
}

TEST_CASE("classifying an unknown token is an error") {
  const auto g = chain(2);
  OstraCredit credit(g, 5);
  CHECK_THROWS_AS(credit.classify(12345, OstraVerdict::kWanted), DomainError);
}
