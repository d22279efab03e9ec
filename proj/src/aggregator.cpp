#include "socialfilter/aggregator.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "socialfilter/errors.hpp"

namespace socialfilter {

double LocalClassifications::report_spammer(HostId host, double confidence) {
  if (confidence < 0.0 || confidence > 1.0) {
    throw DomainError("ReportSpammer confidence out of [0,1]");
  }
  Acc& acc = by_host_[host];
  acc.sum += confidence;
  ++acc.count;
  return acc.sum / acc.count;
}

std::optional<double> LocalClassifications::confidence(HostId host) const {
  const auto it = by_host_.find(host);
  if (it == by_host_.end()) return std::nullopt;
  return it->second.sum / it->second.count;
}

double is_spammer(const std::optional<double>& local_confidence,
                  std::span<const WeightedReport> reports) {
  if (local_confidence) return *local_confidence;
  double num = 0.0;
  double den = 0.0;
  for (const auto& r : reports) {
    const double weight = r.reporter_trust * r.identity;
    num += weight * r.confidence;
    den += weight;
  }
  return den > 0.0 ? num / den : 0.0;
}

double is_spammer(NodeId node, HostId host, double now,
                  const std::optional<double>& local_confidence,
                  const std::unordered_map<NodeId, double>& reporter_trust,
                  const std::unordered_map<NodeId, double>& identity,
                  const std::vector<NodeId>& view, const ReportRepository& repo) {
  if (local_confidence) return *local_confidence;
  std::vector<NodeId> members(view);
  std::sort(members.begin(), members.end());
  const auto in_view = [&](NodeId v) {
    return std::binary_search(members.begin(), members.end(), v);
  };
  std::vector<WeightedReport> weighted;
  for (const auto& r : repo.get_spammer_reports(host, node, in_view, now)) {
    const auto rt = reporter_trust.find(r.reporter);
    const auto id = identity.find(r.reporter);
    weighted.push_back(WeightedReport{r.reporter, r.confidence,
                                      rt == reporter_trust.end() ? 0.0 : rt->second,
                                      id == identity.end() ? 0.0 : id->second});
  }
  return is_spammer(std::nullopt, weighted);
}

bool decide_block(double likelihood, double threshold) { return likelihood > threshold; }

void write_decision_trace_csv(std::span<const DecisionTraceRow> rows, std::ostream& out) {
  out << "now,node,host,likelihood,verdict\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.3f,%u,%u,%.9f,%s", r.now, r.node, r.host, r.likelihood,
                  r.blocked ? "block" : "allow");
    out << buf << '\n';
  }
}

}  // namespace socialfilter
