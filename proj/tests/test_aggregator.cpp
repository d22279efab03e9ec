#include <doctest.h>

#include <cmath>
#include <sstream>

#include "socialfilter/aggregator.hpp"
#include "socialfilter/errors.hpp"
#include "socialfilter/rng.hpp"
#include "socialfilter/trust.hpp"

using namespace socialfilter;

TEST_CASE("worked five-node example aggregates to 0.795") {
  const std::vector<WeightedReport> reports{
      {1, 0.5, 0.4, 0.9},
      {2, 1.0, 0.648, 0.8},
  };
  const double likelihood = is_spammer(std::nullopt, reports);
  const double exact = (0.4 * 0.9 * 0.5 + 0.648 * 0.8 * 1.0) / (0.4 * 0.9 + 0.648 * 0.8);
  CHECK(std::abs(likelihood - exact) < 1e-9);
  CHECK(std::llround(likelihood * 1000.0) == 795);  // the published three-decimal value
  CHECK(decide_block(likelihood, 0.5));
}

TEST_CASE("single weighted reporter passes its confidence through") {
  const std::vector<WeightedReport> reports{{4, 0.7, 0.3, 0.5}};
  CHECK(is_spammer(std::nullopt, reports) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("no reports or no trusted evidence means likelihood zero") {
  CHECK(is_spammer(std::nullopt, {}) == 0.0);
  const std::vector<WeightedReport> weightless{{4, 1.0, 0.0, 0.9}, {5, 1.0, 0.5, 0.0}};
  CHECK(is_spammer(std::nullopt, weightless) == 0.0);
}

TEST_CASE("a local classification preempts peer reports") {
  const std::vector<WeightedReport> reports{{4, 1.0, 0.9, 0.9}};
  CHECK(is_spammer(0.25, reports) == 0.25);
}

TEST_CASE("application reports average per host") {
  LocalClassifications local;
  CHECK(local.report_spammer(10, 0.5) == 0.5);   // half the mail was spam
  local.clear();
  CHECK(local.report_spammer(11, 1.0) == 1.0);   // blacklist hit
  CHECK(local.report_spammer(12, 0.4) == doctest::Approx(0.4));
  CHECK(local.report_spammer(12, 0.8) == doctest::Approx(0.6));
  CHECK(local.confidence(12) == doctest::Approx(0.6));
  CHECK_FALSE(local.confidence(99).has_value());
  CHECK_THROWS_AS(local.report_spammer(13, 1.2), DomainError);
}

TEST_CASE("blocking uses a strict threshold") {
  CHECK(decide_block(0.795, 0.5));
  CHECK_FALSE(decide_block(0.5, 0.5));
  CHECK_FALSE(decide_block(0.0, 0.5));
}

TEST_CASE("aggregation stays inside the contributing confidence range") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<WeightedReport> reports;
    double lo = 1.0, hi = 0.0;
    bool weighted = false;
    const auto count = 1 + rng.below(6);
    for (std::uint64_t i = 0; i < count; ++i) {
      WeightedReport r{static_cast<NodeId>(i), rng.real01(), rng.real01(), rng.real01()};
      reports.push_back(r);
      if (r.reporter_trust * r.identity > 0.0) {
        lo = std::min(lo, r.confidence);
        hi = std::max(hi, r.confidence);
        weighted = true;
      }
    }
    const double out = is_spammer(std::nullopt, reports);
    if (weighted) {
      CHECK(out >= lo - 1e-12);
      CHECK(out <= hi + 1e-12);
    } else {
      CHECK(out == 0.0);
    }
  }
}

TEST_CASE("zero-weight reporters cannot influence the outcome") {
  std::vector<WeightedReport> reports{{1, 0.3, 0.5, 0.8}, {2, 0.9, 0.7, 0.6}};
  const double base = is_spammer(std::nullopt, reports);
  reports.push_back({3, 1.0, 0.0, 1.0});  // rt = 0
  reports.push_back({4, 1.0, 1.0, 0.0});  // id = 0
  CHECK(is_spammer(std::nullopt, reports) == base);
}

TEST_CASE("scaling all reporter-trust values cancels out") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<WeightedReport> reports;
    const auto count = 1 + rng.below(5);
    for (std::uint64_t i = 0; i < count; ++i) {
      reports.push_back(
          {static_cast<NodeId>(i), rng.real01(), 0.1 + 0.9 * rng.real01(), rng.real01()});
    }
    const double base = is_spammer(std::nullopt, reports);
    const double c = 0.2 + 0.7 * rng.real01();
    for (auto& r : reports) r.reporter_trust *= c;
    CHECK(is_spammer(std::nullopt, reports) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("hosts with only zero-confidence reports are never blocked") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<WeightedReport> reports;
    const auto count = rng.below(6);
    for (std::uint64_t i = 0; i < count; ++i) {
      reports.push_back({static_cast<NodeId>(i), 0.0, rng.real01(), rng.real01()});
    }
    CHECK_FALSE(decide_block(is_spammer(std::nullopt, reports), 0.5));
  }
}

TEST_CASE("repository-backed aggregation reproduces the worked example") {
  // Full wiring: view trust graph -> Dijkstra -> report fetch -> Eq. 3.
  TrustGraph tg({1, 2, 3, 4, 5});
  tg.set_direct_trust(3, 5, 0.8);
  tg.set_direct_trust(5, 1, 0.5);
  tg.set_direct_trust(5, 4, 0.9);
  tg.set_direct_trust(4, 2, 0.9);
  const auto rt = tg.reporter_trust_all(3);

  ReportRepository repo;
  repo.submit_spammer_report({1, 0x80C3A901u, 0.5, 10.0});  // human: half was spam
  repo.submit_spammer_report({2, 0x80C3A901u, 1.0, 12.0});  // blacklist subscriber

  const std::unordered_map<NodeId, double> ids{{1, 0.9}, {2, 0.8}, {4, 0.7}, {5, 0.7}};
  const double likelihood =
      is_spammer(3, 0x80C3A901u, 20.0, std::nullopt, rt, ids, {1, 2, 3, 4, 5}, repo);
  const double exact = (0.4 * 0.9 * 0.5 + 0.648 * 0.8 * 1.0) / (0.4 * 0.9 + 0.648 * 0.8);
  CHECK(std::abs(likelihood - exact) < 1e-9);
}

TEST_CASE("decision trace export") {
  const std::vector<DecisionTraceRow> rows{{1.5, 3, 42, 0.795, true}, {2.0, 4, 42, 0.1, false}};
  std::ostringstream out;
  write_decision_trace_csv(rows, out);
  CHECK(out.str() ==
        "now,node,host,likelihood,verdict\n"
        "1.500,3,42,0.795000000,block\n"
        "2.000,4,42,0.100000000,allow\n");
}
