#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "socialfilter/social_graph.hpp"

namespace socialfilter {

using HostId = std::uint32_t;  // IPv4-style 32-bit host identifier

struct SpammerReport {
  NodeId reporter = 0;
  HostId host = 0;
  double confidence = 0.0;  // in [0,1]
  double timestamp = 0.0;   // simulated seconds
};

struct DirectTrustUpdate {
  NodeId from = 0;
  NodeId to = 0;
  double d = 0.0;
  double timestamp = 0.0;
};

struct RepositoryConfig {
  double validity_window = 14.0 * 86400.0;  // T, simulated seconds
  double epsilon = 0.05;                    // minimum delta for sync delivery
  double sync_interval = 3600.0;            // D, simulated seconds
};

/// Centralized store of spammer reports, keyed by host. The latest report
/// per (reporter, host) preempts older ones; expiry against the validity
/// window T is evaluated at read time only.
class ReportRepository {
 public:
  explicit ReportRepository(RepositoryConfig cfg = {}) : cfg_(cfg) {}

  const RepositoryConfig& config() const { return cfg_; }

  void submit_spammer_report(const SpammerReport& r);

  /// Live, unexpired reports on host from reporters inside the requester's
  /// view, the requester itself excluded. `in_view` decides membership.
  std::vector<SpammerReport> get_spammer_reports(
      HostId host, NodeId requester, const std::function<bool(NodeId)>& in_view,
      double now) const;

  /// Allocation-free variant for hot paths.
  template <typename InView, typename Fn>
  void for_each_live_report(HostId host, NodeId requester, InView&& in_view, double now,
                            Fn&& fn) const {
    const auto it = reports_.find(host);
    if (it == reports_.end()) return;
    for (const auto& report : it->second) {
      if (report.reporter == requester) continue;
      if (now - report.timestamp > cfg_.validity_window) continue;
      if (!in_view(report.reporter)) continue;
      fn(report);
    }
  }

  std::size_t live_report_count() const;
  const std::vector<HostId>& reported_hosts() const { return reported_hosts_; }

  /// CSV export: "timestamp,reporter,host,confidence" rows, sorted.
  void write_report_log_csv(std::ostream& out) const;

 private:
  RepositoryConfig cfg_;
  std::unordered_map<HostId, std::vector<SpammerReport>> reports_;  // one live per reporter
  std::unordered_map<std::uint64_t, std::uint32_t> slot_;          // (reporter,host) -> slot
  std::vector<HostId> reported_hosts_;  // first-report order, for sampling
};

/// Centralized store of direct-trust updates, keyed by issuing node. The
/// latest update per (from, to) wins. Values pass through an epoch gate:
/// writes land in the live slot immediately, while readers of other nodes'
/// trust see the value as of the last epoch boundary (the repository sync
/// cadence D). advance_epoch() marks such a boundary.
class TrustUpdateStore {
 public:
  explicit TrustUpdateStore(std::uint32_t n_hint = 0) { out_.resize(n_hint); }

  struct Entry {
    NodeId to = 0;
    double live = 0.0;
    double frozen = 0.0;  // value at the start of last_write_epoch
    std::uint32_t k = 0;  // verification count
    std::uint32_t last_write_epoch = 0;
  };

  std::uint32_t epoch() const { return epoch_; }
  void advance_epoch() { ++epoch_; }

  /// Bootstrap value (social-trust or pre-trust initialization): visible
  /// immediately, counts no verification.
  void seed_initial(NodeId from, NodeId to, double d);

  void submit(NodeId from, NodeId to, double d, double timestamp);

  /// Current value, as the issuer itself sees it. 0.0 when never set.
  double live(NodeId from, NodeId to) const;

  /// Value as of the last epoch boundary — what a peer syncing every D
  /// would hold right now.
  double published(NodeId from, NodeId to) const;

  std::uint32_t verification_count(NodeId from, NodeId to) const;

  std::span<const Entry> out_edges(NodeId from) const {
    if (from >= out_.size()) return {};
    return {out_[from].data(), out_[from].size()};
  }

  double published_value(const Entry& e) const {
    return e.last_write_epoch == epoch_ ? e.frozen : e.live;
  }

  /// The repository-side sync rule: current non-zero d_jv for j in
  /// view \ requester, v in view, delivered only when it moved more than
  /// epsilon from what the requester last saw (absent last-seen reads as 0).
  std::vector<DirectTrustUpdate> sync_direct_trust(
      NodeId requester, const std::vector<NodeId>& view,
      const std::unordered_map<std::uint64_t, double>& last_seen, double epsilon) const;

  static std::uint64_t pair_key(NodeId from, NodeId to) {
    return (static_cast<std::uint64_t>(from) << 32) | to;
  }

  /// CSV export: "from,to,d,k" rows, sorted.
  void write_trust_csv(std::ostream& out) const;

 private:
  Entry& entry_for(NodeId from, NodeId to);
  const Entry* find(NodeId from, NodeId to) const;

  std::uint32_t epoch_ = 0;
  std::vector<std::vector<Entry>> out_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;  // pair key -> slot in out_[from]
};

}  // namespace socialfilter
