#include "socialfilter/repository.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "socialfilter/errors.hpp"

namespace socialfilter {

namespace {
std::uint64_t report_key(NodeId reporter, HostId host) {
  return (static_cast<std::uint64_t>(reporter) << 32) | host;
}
}  // namespace

void ReportRepository::submit_spammer_report(const SpammerReport& r) {
  if (r.confidence < 0.0 || r.confidence > 1.0) {
    throw DomainError("report confidence out of [0,1]");
  }
  auto& per_host = reports_[r.host];
  if (per_host.empty()) reported_hosts_.push_back(r.host);
  const auto [it, inserted] =
      slot_.try_emplace(report_key(r.reporter, r.host), static_cast<std::uint32_t>(per_host.size()));
  if (inserted) {
    per_host.push_back(r);
  } else if (per_host[it->second].timestamp <= r.timestamp) {
    per_host[it->second] = r;
  }
}

std::vector<SpammerReport> ReportRepository::get_spammer_reports(
    HostId host, NodeId requester, const std::function<bool(NodeId)>& in_view,
    double now) const {
  std::vector<SpammerReport> out;
  for_each_live_report(host, requester, in_view, now,
                       [&](const SpammerReport& r) { out.push_back(r); });
  std::sort(out.begin(), out.end(),
            [](const SpammerReport& a, const SpammerReport& b) { return a.reporter < b.reporter; });
  return out;
}

std::size_t ReportRepository::live_report_count() const {
  std::size_t total = 0;
  for (const auto& [host, per_host] : reports_) total += per_host.size();
  return total;
}

void ReportRepository::write_report_log_csv(std::ostream& out) const {
  std::vector<SpammerReport> rows;
  rows.reserve(live_report_count());
  for (const auto& [host, per_host] : reports_) {
    rows.insert(rows.end(), per_host.begin(), per_host.end());
  }
  std::sort(rows.begin(), rows.end(), [](const SpammerReport& a, const SpammerReport& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.reporter != b.reporter) return a.reporter < b.reporter;
    return a.host < b.host;
  });
  out << "timestamp,reporter,host,confidence\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.3f,%u,%u,%.9f", r.timestamp, r.reporter, r.host,
                  r.confidence);
    out << buf << '\n';
  }
}

TrustUpdateStore::Entry& TrustUpdateStore::entry_for(NodeId from, NodeId to) {
  if (from >= out_.size()) out_.resize(from + 1);
  const auto [it, inserted] =
      index_.try_emplace(pair_key(from, to), static_cast<std::uint32_t>(out_[from].size()));
  if (inserted) {
    out_[from].push_back(Entry{to, 0.0, 0.0, 0, epoch_});
  }
  return out_[from][it->second];
}

const TrustUpdateStore::Entry* TrustUpdateStore::find(NodeId from, NodeId to) const {
  const auto it = index_.find(pair_key(from, to));
  if (it == index_.end()) return nullptr;
  return &out_[from][it->second];
}

void TrustUpdateStore::seed_initial(NodeId from, NodeId to, double d) {
  if (d < 0.0 || d > 1.0) throw DomainError("direct trust out of [0,1]");
  Entry& e = entry_for(from, to);
  e.live = d;
  e.frozen = d;
  e.last_write_epoch = epoch_;
}

void TrustUpdateStore::submit(NodeId from, NodeId to, double d, double timestamp) {
  (void)timestamp;
  if (d < 0.0 || d > 1.0) throw DomainError("direct trust out of [0,1]");
  Entry& e = entry_for(from, to);
  if (e.last_write_epoch != epoch_) {
    e.frozen = e.live;
    e.last_write_epoch = epoch_;
  }
  e.live = d;
  ++e.k;
}

double TrustUpdateStore::live(NodeId from, NodeId to) const {
  const Entry* e = find(from, to);
  return e ? e->live : 0.0;
}

double TrustUpdateStore::published(NodeId from, NodeId to) const {
  const Entry* e = find(from, to);
  return e ? published_value(*e) : 0.0;
}

std::uint32_t TrustUpdateStore::verification_count(NodeId from, NodeId to) const {
  const Entry* e = find(from, to);
  return e ? e->k : 0;
}

std::vector<DirectTrustUpdate> TrustUpdateStore::sync_direct_trust(
    NodeId requester, const std::vector<NodeId>& view,
    const std::unordered_map<std::uint64_t, double>& last_seen, double epsilon) const {
  std::vector<DirectTrustUpdate> out;
  std::vector<NodeId> members(view);
  std::sort(members.begin(), members.end());
  const auto in_view = [&](NodeId v) {
    return std::binary_search(members.begin(), members.end(), v);
  };
  for (const NodeId j : members) {
    if (j == requester) continue;
    for (const Entry& e : out_edges(j)) {
      if (!in_view(e.to)) continue;
      if (e.live == 0.0) continue;  // only non-zero values are ever delivered
      const auto seen = last_seen.find(pair_key(j, e.to));
      const double base = seen == last_seen.end() ? 0.0 : seen->second;
      if (std::abs(e.live - base) > epsilon) {
        out.push_back(DirectTrustUpdate{j, e.to, e.live, 0.0});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const DirectTrustUpdate& a, const DirectTrustUpdate& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
  return out;
}

void TrustUpdateStore::write_trust_csv(std::ostream& out) const {
  out << "from,to,d,k\n";
  char buf[64];
  for (NodeId from = 0; from < out_.size(); ++from) {
    std::vector<Entry> rows(out_[from].begin(), out_[from].end());
    std::sort(rows.begin(), rows.end(),
              [](const Entry& a, const Entry& b) { return a.to < b.to; });
    for (const Entry& e : rows) {
      std::snprintf(buf, sizeof(buf), "%u,%u,%.9f,%u", from, e.to, e.live, e.k);
      out << buf << '\n';
    }
  }
}

}  // namespace socialfilter
