#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "socialfilter/repository.hpp"

namespace socialfilter {

enum class ClassifierKind : std::uint8_t { kInstant, kHuman, kNone };

/// Per-node application-facing state: local classifications made by the
/// node's own applications. Multiple applications reporting the same host
/// average (unweighted).
class LocalClassifications {
 public:
  /// ReportSpammer: record an application's confidence and return the
  /// node's combined local confidence for the host.
  double report_spammer(HostId host, double confidence);

  std::optional<double> confidence(HostId host) const;
  void clear() { by_host_.clear(); }

 private:
  struct Acc {
    double sum = 0.0;
    std::uint32_t count = 0;
  };
  std::unordered_map<HostId, Acc> by_host_;
};

struct WeightedReport {
  NodeId reporter = 0;
  double confidence = 0.0;
  double reporter_trust = 0.0;
  double identity = 0.0;
};

/// Eq.-3 aggregation over peer reports: sum(rt * id * c) / sum(rt * id).
/// 0 when no trusted evidence. A node's own classification, when present,
/// preempts peer evidence entirely.
double is_spammer(const std::optional<double>& local_confidence,
                  std::span<const WeightedReport> reports);

/// Convenience form matching the node-level call: pulls live in-view reports
/// from the repository and weighs them with the supplied trust and identity
/// maps.
double is_spammer(NodeId node, HostId host, double now,
                  const std::optional<double>& local_confidence,
                  const std::unordered_map<NodeId, double>& reporter_trust,
                  const std::unordered_map<NodeId, double>& identity,
                  const std::vector<NodeId>& view, const ReportRepository& repo);

/// Block iff likelihood strictly exceeds the threshold.
bool decide_block(double likelihood, double threshold);

struct DecisionTraceRow {
  double now = 0.0;
  NodeId node = 0;
  HostId host = 0;
  double likelihood = 0.0;
  bool blocked = false;
};

/// CSV export: "now,node,host,likelihood,verdict" rows.
void write_decision_trace_csv(std::span<const DecisionTraceRow> rows, std::ostream& out);

}  // namespace socialfilter
