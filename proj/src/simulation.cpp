#include "socialfilter/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <queue>

#include "socialfilter/errors.hpp"
#include "socialfilter/ostra.hpp"
#include "socialfilter/repository.hpp"
#include "socialfilter/trust.hpp"

namespace socialfilter {

namespace {

constexpr double kHourSecs = 3600.0;
constexpr double kDaySecs = 86400.0;

// Sub-stream tags for the run's root generator.
enum Stream : std::uint64_t {
  kStreamGraph = 1,
  kStreamSybil,
  kStreamRoles,
  kStreamTrustInit,
  kStreamViews,
  kStreamIds,
  kStreamWorkload,
  kStreamVerify,
};

struct PlannedEvent {
  double t = 0.0;
  enum Kind : std::uint8_t { kSend, kFalseReport } kind = kSend;
  NodeId a = 0;  // sender / reporter
  NodeId b = 0;  // recipient / falsely accused legitimate host
  NodeId c = 0;  // colluder target for false reports (UINT32_MAX when none)
  bool spam = false;
  double classify_delay = 0.0;
};

struct HeapEvent {
  double t = 0.0;
  std::uint64_t seq = 0;
  enum Kind : std::uint8_t { kClassify, kSyncTrust, kOstraVerdict } kind = kClassify;
  NodeId node = 0;
  HostId host = 0;
  double confidence = 0.0;
  std::uint64_t token = 0;
  bool unwanted = false;
};

struct HeapEventAfter {
  bool operator()(const HeapEvent& a, const HeapEvent& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.seq > b.seq;
  }
};

void check(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(std::string("config field '") + field + "': " + what);
}

}  // namespace

void SimConfig::validate() const {
  check(sim_hours > 0.0, "sim_hours", "must be positive");
  check(legit_rate >= 0.0, "legit_rate", "must be non-negative");
  check(spam_rate >= 0.0, "spam_rate", "must be non-negative");
  check(false_report_rate >= 0.0, "false_report_rate", "must be non-negative");
  const double mix = dest_friend + dest_friend_of_friend + dest_random;
  check(dest_friend >= 0.0 && dest_friend_of_friend >= 0.0 && dest_random >= 0.0 &&
            std::abs(mix - 1.0) < 1e-9,
        "dest_mix", "fractions must be non-negative and sum to 1");
  check(spammer_fraction >= 0.0 && spammer_fraction <= 1.0, "spammer_fraction", "must be in [0,1]");
  check(false_reporter_fraction >= 0.0 && false_reporter_fraction <= 1.0,
        "false_reporter_fraction", "must be in [0,1]");
  check(instant_classifier_fraction >= 0.0 && instant_classifier_fraction <= 1.0,
        "instant_classifier_fraction", "must be in [0,1]");
  check(human_delay_mean_hours >= 0.0, "human_delay_mean_hours", "must be non-negative");
  check(view_size >= 1, "view_size", "must be >= 1");
  check(threshold >= 0.0 && threshold <= 1.0, "threshold", "must be in [0,1]");
  check(alpha >= 0.0 && alpha <= 1.0, "alpha", "must be in [0,1]");
  check(validity_window_days > 0.0, "validity_window_days", "must be positive");
  check(epsilon >= 0.0, "epsilon", "must be non-negative");
  check(sync_interval_hours > 0.0, "sync_interval_hours", "must be positive");
  check(p_verify >= 0.0 && p_verify <= 1.0, "p_verify", "must be in [0,1]");
  check(ostra_credit_bound >= 1, "ostra_credit_bound", "must be >= 1");
  check(id_l >= 1, "id_l", "must be >= 1");
  if (graph.file.empty()) {
    check(graph.n > graph.k && graph.k >= 2 && graph.k % 2 == 0, "graph",
          "small-world parameters need n > k, k even and >= 2");
    check(graph.beta >= 0.0 && graph.beta <= 1.0, "graph.beta", "must be in [0,1]");
  }
}

std::uint64_t EngineTimeline::total_spam_sent() const {
  std::uint64_t s = 0;
  for (const auto& r : rows) s += r.spam_sent;
  return s;
}
std::uint64_t EngineTimeline::total_spam_blocked() const {
  std::uint64_t s = 0;
  for (const auto& r : rows) s += r.spam_blocked;
  return s;
}
std::uint64_t EngineTimeline::total_legit_sent() const {
  std::uint64_t s = 0;
  for (const auto& r : rows) s += r.legit_sent;
  return s;
}
std::uint64_t EngineTimeline::total_legit_blocked() const {
  std::uint64_t s = 0;
  for (const auto& r : rows) s += r.legit_blocked;
  return s;
}
double EngineTimeline::final_blocked_spam_pct() const {
  const auto sent = total_spam_sent();
  return sent == 0 ? 0.0 : 100.0 * double(total_spam_blocked()) / double(sent);
}
double EngineTimeline::final_blocked_legit_pct() const {
  const auto sent = total_legit_sent();
  return sent == 0 ? 0.0 : 100.0 * double(total_legit_blocked()) / double(sent);
}

const EngineTimeline& SimResult::timeline(const std::string& engine) const {
  for (const auto& tl : timelines) {
    if (tl.engine == engine) return tl;
  }
  throw DomainError("no timeline for engine " + engine);
}

void SimResult::write_csv(std::ostream& out) const {
  out << "sim_hour,engine,spam_sent,spam_blocked,legit_sent,legit_blocked\n";
  for (const auto& tl : timelines) {
    for (const auto& r : tl.rows) {
      out << r.sim_hour << ',' << tl.engine << ',' << r.spam_sent << ',' << r.spam_blocked << ','
          << r.legit_sent << ',' << r.legit_blocked << '\n';
    }
  }
}

RoleAssignment assign_roles(const SocialGraph& g, std::uint32_t first_sybil, const SimConfig& cfg,
                            Rng rng) {
  const std::uint32_t n = g.node_count();
  const std::uint32_t honest_n = first_sybil;
  RoleAssignment out;
  out.roles.assign(n, Role::kHonest);
  out.classifiers.assign(n, ClassifierKind::kHuman);
  for (NodeId v = first_sybil; v < n; ++v) {
    out.roles[v] = Role::kSybil;
    out.classifiers[v] = ClassifierKind::kNone;
    out.spammers.push_back(v);
    out.false_reporters.push_back(v);
  }

  const auto spam_count = static_cast<std::uint32_t>(std::llround(cfg.spammer_fraction * honest_n));
  const auto fr_count =
      static_cast<std::uint32_t>(std::llround(cfg.false_reporter_fraction * honest_n));
  const auto ic_count =
      static_cast<std::uint32_t>(std::llround(cfg.instant_classifier_fraction * honest_n));
  if (spam_count + fr_count + ic_count > honest_n) {
    throw ConfigError("config field 'spammer_fraction/false_reporter_fraction/"
                      "instant_classifier_fraction': fractions exhaust the population");
  }

  // One shuffled pass hands out the disjoint roles; instant classification
  // stays with well-behaved nodes so pre-trusted sets are honest.
  Rng role_rng = rng.fork(kStreamRoles);
  std::vector<NodeId> order(honest_n);
  for (std::uint32_t i = 0; i < honest_n; ++i) order[i] = i;
  role_rng.shuffle(order);
  std::uint32_t cursor = 0;
  for (std::uint32_t i = 0; i < spam_count; ++i) {
    const NodeId v = order[cursor++];
    out.roles[v] = Role::kSpammer;
    out.classifiers[v] = ClassifierKind::kNone;
    out.spammers.push_back(v);
  }
  for (std::uint32_t i = 0; i < fr_count; ++i) {
    const NodeId v = order[cursor++];
    out.roles[v] = Role::kFalseReporter;
    out.classifiers[v] = ClassifierKind::kNone;
    out.false_reporters.push_back(v);
  }
  for (std::uint32_t i = 0; i < ic_count; ++i) {
    const NodeId v = order[cursor++];
    out.classifiers[v] = ClassifierKind::kInstant;
    out.instant_classifiers.push_back(v);
  }
  for (NodeId v = 0; v < honest_n; ++v) {
    if (out.roles[v] == Role::kHonest) out.honest_targets.push_back(v);
  }
  std::sort(out.spammers.begin(), out.spammers.end());
  std::sort(out.false_reporters.begin(), out.false_reporters.end());
  std::sort(out.instant_classifiers.begin(), out.instant_classifiers.end());

  // Each false reporter shields one colluding spammer with zero-confidence
  // reports and stays silent about the rest.
  out.colluder_of.assign(n, UINT32_MAX);
  if (!out.spammers.empty()) {
    for (const NodeId f : out.false_reporters) {
      out.colluder_of[f] = out.spammers[role_rng.below(out.spammers.size())];
    }
  }
  return out;
}

std::vector<ViewSet> sample_views(const SocialGraph& g, std::uint32_t view_size,
                                  std::uint32_t pre_trusted_size,
                                  const std::vector<NodeId>& instant_classifiers, Rng rng) {
  const std::uint32_t n = g.node_count();
  const std::uint32_t vs = std::min(view_size, n);  // view_size >= n: view = all nodes
  if (vs < 1) throw ConfigError("config field 'view_size': must be >= 1");
  if (pre_trusted_size > 0 && instant_classifiers.size() < pre_trusted_size + 1u) {
    throw ConfigError(
        "config field 'pre_trusted_size': needs more instant classifiers than pre-trusted slots");
  }
  if (vs < pre_trusted_size + 1) {
    throw ConfigError("config field 'view_size': too small for owner plus pre-trusted set");
  }

  Rng views_rng = rng.fork(kStreamViews);
  std::vector<ViewSet> views(n);
  std::vector<std::uint8_t> mark(n, 0);
  std::vector<NodeId> marked;
  for (NodeId owner = 0; owner < n; ++owner) {
    Rng r = views_rng.fork(owner);
    ViewSet& view = views[owner];
    view.owner = owner;
    marked.clear();
    const auto take = [&](NodeId v) {
      if (mark[v]) return false;
      mark[v] = 1;
      marked.push_back(v);
      return true;
    };
    take(owner);
    while (view.pre_trusted.size() < pre_trusted_size) {
      const NodeId p = instant_classifiers[r.below(instant_classifiers.size())];
      if (p == owner) continue;
      if (take(p)) view.pre_trusted.push_back(p);
    }
    if (vs >= n) {
      view.members.resize(n);
      for (NodeId v = 0; v < n; ++v) view.members[v] = v;
    } else {
      std::uint32_t have = static_cast<std::uint32_t>(marked.size());
      while (have < vs) {
        const auto v = static_cast<NodeId>(r.below(n));
        if (take(v)) ++have;
      }
      view.members = marked;
      std::sort(view.members.begin(), view.members.end());
    }
    for (const NodeId v : marked) mark[v] = 0;
    std::sort(view.pre_trusted.begin(), view.pre_trusted.end());
    view.rebuild_mask(n);
  }
  return views;
}

namespace {

struct Workload {
  std::vector<PlannedEvent> planned;  // time-sorted
};

Workload generate_workload(const SocialGraph& g, const RoleAssignment& roles,
                           const SimConfig& cfg, Rng rng) {
  Workload w;
  const double end = cfg.sim_hours * kHourSecs;
  const std::uint32_t n = g.node_count();
  Rng wl = rng.fork(kStreamWorkload);

  const auto classify_delay_for = [&](Rng& r, NodeId dest) {
    if (roles.classifiers[dest] == ClassifierKind::kInstant) return 0.0;
    return r.exponential(cfg.human_delay_mean_hours * kHourSecs);
  };

  for (NodeId u = 0; u < n; ++u) {
    const bool spams = roles.roles[u] == Role::kSpammer || roles.roles[u] == Role::kSybil;
    if (spams && cfg.spam_rate > 0.0) {
      Rng r = wl.fork(0x5100u).fork(u);
      for (double t = r.exponential(kDaySecs / cfg.spam_rate); t < end;
           t += r.exponential(kDaySecs / cfg.spam_rate)) {
        NodeId dest = u;
        while (dest == u) dest = static_cast<NodeId>(r.below(n));
        w.planned.push_back(
            PlannedEvent{t, PlannedEvent::kSend, u, dest, 0, true, classify_delay_for(r, dest)});
      }
    }
    const bool sends_legit = !spams;
    if (sends_legit && cfg.legit_rate > 0.0 && n > 1) {
      Rng r = wl.fork(0x1E617u).fork(u);
      const auto nbrs = g.neighbors(u);
      for (double t = r.exponential(kDaySecs / cfg.legit_rate); t < end;
           t += r.exponential(kDaySecs / cfg.legit_rate)) {
        NodeId dest = u;
        const double roll = r.real01();
        if (roll < cfg.dest_friend && !nbrs.empty()) {
          dest = nbrs[r.below(nbrs.size())];
        } else if (roll < cfg.dest_friend + cfg.dest_friend_of_friend && !nbrs.empty()) {
          // Friend-of-friend by a two-hop walk; falls back to random.
          for (int attempt = 0; attempt < 8; ++attempt) {
            const NodeId f = nbrs[r.below(nbrs.size())];
            const auto fn = g.neighbors(f);
            if (fn.empty()) continue;
            const NodeId cand = fn[r.below(fn.size())];
            if (cand != u && !g.has_edge(u, cand)) {
              dest = cand;
              break;
            }
          }
        }
        while (dest == u) dest = static_cast<NodeId>(r.below(n));
        w.planned.push_back(
            PlannedEvent{t, PlannedEvent::kSend, u, dest, 0, false, classify_delay_for(r, dest)});
      }
    }
    const bool false_reports =
        roles.roles[u] == Role::kFalseReporter || roles.roles[u] == Role::kSybil;
    if (false_reports && cfg.false_report_rate > 0.0 && !roles.honest_targets.empty()) {
      Rng r = wl.fork(0xFA15Eu).fork(u);
      for (double t = r.exponential(kDaySecs / cfg.false_report_rate); t < end;
           t += r.exponential(kDaySecs / cfg.false_report_rate)) {
        const NodeId victim = roles.honest_targets[r.below(roles.honest_targets.size())];
        w.planned.push_back(
            PlannedEvent{t, PlannedEvent::kFalseReport, u, victim, roles.colluder_of[u]});
      }
    }
  }
  std::stable_sort(w.planned.begin(), w.planned.end(),
                   [](const PlannedEvent& a, const PlannedEvent& b) { return a.t < b.t; });
  return w;
}

/// SocialFilter engine: report-driven blocking with trust-weighted
/// aggregation over the shared workload.
class SocialFilterEngine {
 public:
  SocialFilterEngine(const SocialGraph& g, const RoleAssignment& roles,
                     const std::vector<ViewSet>& views, const std::vector<double>& ids,
                     const SimConfig& cfg, Rng rng)
      : g_(g),
        roles_(roles),
        views_(views),
        ids_(ids),
        cfg_(cfg),
        repo_(RepositoryConfig{cfg.validity_window_days * kDaySecs, cfg.epsilon,
                               cfg.sync_interval_hours * kHourSecs}),
        store_(g.node_count()),
        locals_(g.node_count()),
        verify_rng_(rng.fork(kStreamVerify)) {
    scratch_.resize(g.node_count());
    seed_trust(rng.fork(kStreamTrustInit));
  }

  EngineTimeline run(const Workload& workload, std::vector<DecisionTraceRow>* trace) {
    const double end = cfg_.sim_hours * kHourSecs;
    const auto hours = static_cast<std::uint32_t>(std::ceil(cfg_.sim_hours));
    EngineTimeline tl;
    tl.engine = "socialfilter";
    tl.rows.resize(hours);
    for (std::uint32_t h = 0; h < hours; ++h) tl.rows[h].sim_hour = h;

    std::priority_queue<HeapEvent, std::vector<HeapEvent>, HeapEventAfter> heap;
    std::uint64_t seq = workload.planned.size();
    const double sync = cfg_.sync_interval_hours * kHourSecs;
    for (double t = sync; t < end; t += sync) {
      heap.push(HeapEvent{t, seq++, HeapEvent::kSyncTrust});
    }

    std::size_t ip = 0;
    while (ip < workload.planned.size() || !heap.empty()) {
      const bool take_planned =
          ip < workload.planned.size() &&
          (heap.empty() || workload.planned[ip].t < heap.top().t ||
           (workload.planned[ip].t == heap.top().t && ip < heap.top().seq));
      if (take_planned) {
        const PlannedEvent& ev = workload.planned[ip++];
        if (ev.kind == PlannedEvent::kSend) {
          process_send(ev, tl, heap, seq, trace);
        } else {
          process_false_report(ev);
        }
      } else {
        const HeapEvent ev = heap.top();
        heap.pop();
        if (ev.kind == HeapEvent::kSyncTrust) {
          store_.advance_epoch();
        } else if (ev.t < end) {
          classify(ev.node, ev.host, ev.confidence, ev.t);
        }
      }
    }
    return tl;
  }

  const ReportRepository& repository() const { return repo_; }
  const TrustUpdateStore& trust_store() const { return store_; }

 private:
  void seed_trust(Rng rng) {
    // d0 = st for every tagged acquaintance; untagged edges draw the
    // configured uniform [0.5, 1.0] admin tag.
    for (const auto& [u, v] : g_.edges()) {
      const double st_uv = g_.social_trust_or(u, v, rng.uniform(0.5, 1.0));
      const double st_vu = g_.social_trust_or(v, u, rng.uniform(0.5, 1.0));
      store_.seed_initial(u, v, st_uv);
      store_.seed_initial(v, u, st_vu);
    }
    for (const ViewSet& view : views_) {
      for (const NodeId p : view.pre_trusted) store_.seed_initial(view.owner, p, 1.0);
    }
  }

  void process_send(const PlannedEvent& ev, EngineTimeline& tl,
                    std::priority_queue<HeapEvent, std::vector<HeapEvent>, HeapEventAfter>& heap,
                    std::uint64_t& seq, std::vector<DecisionTraceRow>* trace) {
    MetricsRow& row = tl.rows[hour_of(ev.t, tl.rows.size())];
    (ev.spam ? row.spam_sent : row.legit_sent)++;
    const NodeId sender = ev.a;
    const NodeId recipient = ev.b;
    const HostId host = sender;

    if (roles_.adversarial(recipient)) {
      // Colluders never refuse mail and never report each other. A false
      // reporter shields its partner spammer with a zero-confidence report;
      // its accusations against legitimate users run on their own schedule.
      if (ev.spam && roles_.colluder_of[recipient] == sender) {
        repo_.submit_spammer_report(SpammerReport{recipient, host, 0.0, ev.t});
      }
      return;
    }

    if (roles_.classifiers[recipient] == ClassifierKind::kInstant) {
      classify(recipient, host, ev.spam ? 1.0 : 0.0, ev.t);
    }
    const double likelihood = evaluate(recipient, host, ev.t);
    const bool blocked = decide_block(likelihood, cfg_.threshold);
    if (blocked) (ev.spam ? row.spam_blocked : row.legit_blocked)++;
    if (trace) trace->push_back(DecisionTraceRow{ev.t, recipient, host, likelihood, blocked});
    if (!blocked && roles_.classifiers[recipient] == ClassifierKind::kHuman) {
      heap.push(HeapEvent{ev.t + ev.classify_delay, seq++, HeapEvent::kClassify, recipient, host,
                          ev.spam ? 1.0 : 0.0});
    }
  }

  void process_false_report(const PlannedEvent& ev) {
    repo_.submit_spammer_report(SpammerReport{ev.a, ev.b, 1.0, ev.t});
    if (ev.c != UINT32_MAX) {
      repo_.submit_spammer_report(SpammerReport{ev.a, ev.c, 0.0, ev.t});
    }
  }

  /// IsSpammer for one delivery attempt: local classification first, else
  /// Eq.-3 aggregation of live in-view reports.
  double evaluate(NodeId node, HostId host, double now) {
    if (const auto local = locals_[node].confidence(host)) return *local;
    const ViewSet& view = views_[node];

    reports_buf_.clear();
    bool homogeneous = true;
    double c0 = 0.0;
    repo_.for_each_live_report(
        host, node, [&](NodeId v) { return view.contains(v); }, now,
        [&](const SpammerReport& r) {
          if (reports_buf_.empty()) {
            c0 = r.confidence;
          } else if (r.confidence != c0) {
            homogeneous = false;
          }
          reports_buf_.emplace_back(r.reporter, r.confidence);
        });
    if (reports_buf_.empty()) return 0.0;

    targets_buf_.clear();
    for (const auto& [reporter, conf] : reports_buf_) {
      if (ids_[reporter] > 0.0) targets_buf_.push_back(reporter);
    }
    if (targets_buf_.empty()) return 0.0;

    if (homogeneous) {
      // The ratio collapses to the common confidence as soon as any
      // reporter carries positive weight.
      return store_trust_reachable(view, store_, targets_buf_, scratch_) ? c0 : 0.0;
    }
    store_reporter_trust(view, store_, targets_buf_, scratch_);
    double num = 0.0;
    double den = 0.0;
    for (const auto& [reporter, conf] : reports_buf_) {
      const double weight = scratch_.best[reporter] * ids_[reporter];
      num += weight * conf;
      den += weight;
    }
    return den > 0.0 ? num / den : 0.0;
  }

  void classify(NodeId node, HostId host, double confidence, double now) {
    locals_[node].report_spammer(host, confidence);
    repo_.submit_spammer_report(SpammerReport{node, host, confidence, now});
    verify_reports(node, host, confidence, now);
    if (cfg_.p_verify > 0.0 && verify_rng_.chance(cfg_.p_verify) &&
        !repo_.reported_hosts().empty()) {
      // Deliberate observation of a random reported host, purely to audit
      // its reporters.
      const HostId h = repo_.reported_hosts()[verify_rng_.below(repo_.reported_hosts().size())];
      const bool spam_host =
          roles_.roles[h] == Role::kSpammer || roles_.roles[h] == Role::kSybil;
      verify_reports(node, h, spam_host ? 1.0 : 0.0, now);
    }
  }

  void verify_reports(NodeId node, HostId host, double own_confidence, double now) {
    const ViewSet& view = views_[node];
    repo_.for_each_live_report(
        host, node, [&](NodeId v) { return view.contains(v); }, now,
        [&](const SpammerReport& r) {
          const double similarity = 1.0 - std::abs(own_confidence - r.confidence);
          const double d = store_.live(node, r.reporter);
          store_.submit(node, r.reporter, cfg_.alpha * d + (1.0 - cfg_.alpha) * similarity, now);
        });
  }

  static std::uint32_t hour_of(double t, std::size_t rows) {
    const auto h = static_cast<std::uint32_t>(t / kHourSecs);
    return h >= rows ? static_cast<std::uint32_t>(rows - 1) : h;
  }

  const SocialGraph& g_;
  const RoleAssignment& roles_;
  const std::vector<ViewSet>& views_;
  const std::vector<double>& ids_;
  const SimConfig& cfg_;
  ReportRepository repo_;
  TrustUpdateStore store_;
  std::vector<LocalClassifications> locals_;
  TrustScratch scratch_;
  Rng verify_rng_;
  std::vector<std::pair<NodeId, double>> reports_buf_;
  std::vector<NodeId> targets_buf_;
};

/// Ostra engine: token issuance over per-link credit, classification-driven
/// transfers, same workload.
class OstraEngine {
 public:
  OstraEngine(const SocialGraph& g, const RoleAssignment& roles, const SimConfig& cfg)
      : roles_(roles), cfg_(cfg), credit_(g, cfg.ostra_credit_bound) {}

  EngineTimeline run(const Workload& workload) {
    const double end = cfg_.sim_hours * kHourSecs;
    const auto hours = static_cast<std::uint32_t>(std::ceil(cfg_.sim_hours));
    EngineTimeline tl;
    tl.engine = "ostra";
    tl.rows.resize(hours);
    for (std::uint32_t h = 0; h < hours; ++h) tl.rows[h].sim_hour = h;

    std::priority_queue<HeapEvent, std::vector<HeapEvent>, HeapEventAfter> heap;
    std::uint64_t seq = workload.planned.size();
    std::size_t ip = 0;
    while (ip < workload.planned.size() || !heap.empty()) {
      const bool take_planned =
          ip < workload.planned.size() &&
          (heap.empty() || workload.planned[ip].t < heap.top().t ||
           (workload.planned[ip].t == heap.top().t && ip < heap.top().seq));
      if (take_planned) {
        const PlannedEvent& ev = workload.planned[ip++];
        if (ev.kind != PlannedEvent::kSend) continue;  // reports are SocialFilter-side
        MetricsRow& row = tl.rows[hour_of(ev.t, tl.rows.size())];
        (ev.spam ? row.spam_sent : row.legit_sent)++;
        const auto path = credit_.find_social_path(ev.a, ev.b);
        const auto token = path ? credit_.issue_token(*path, ev.t) : std::nullopt;
        if (!token) {
          (ev.spam ? row.spam_blocked : row.legit_blocked)++;
          continue;
        }
        // Receiver verdict; colluding receivers invert their classification.
        const bool unwanted = roles_.adversarial(ev.b) ? !ev.spam : ev.spam;
        if (ev.classify_delay <= 0.0) {
          credit_.classify(*token, unwanted ? OstraVerdict::kUnwanted : OstraVerdict::kWanted);
        } else {
          heap.push(HeapEvent{ev.t + ev.classify_delay, seq++, HeapEvent::kOstraVerdict, 0, 0, 0.0,
                              *token, unwanted});
        }
      } else {
        const HeapEvent ev = heap.top();
        heap.pop();
        if (ev.t < end) {
          credit_.classify(ev.token, ev.unwanted ? OstraVerdict::kUnwanted : OstraVerdict::kWanted);
        }
      }
    }
    return tl;
  }

 private:
  static std::uint32_t hour_of(double t, std::size_t rows) {
    const auto h = static_cast<std::uint32_t>(t / kHourSecs);
    return h >= rows ? static_cast<std::uint32_t>(rows - 1) : h;
  }

  const RoleAssignment& roles_;
  const SimConfig& cfg_;
  OstraCredit credit_;
};

}  // namespace

SimResult run_simulation(const SimConfig& cfg) {
  cfg.validate();
  Rng root(cfg.seed);

  SocialGraph g = cfg.graph.file.empty()
                      ? SocialGraph::generate_small_world(cfg.graph.n, cfg.graph.k, cfg.graph.beta,
                                                          root.fork(kStreamGraph).next())
                      : SocialGraph::load_file(cfg.graph.file);
  const std::uint32_t first_sybil = g.node_count();
  if (cfg.sybil.num_sybils > 0) {
    SybilRegionSpec spec;
    spec.attacker = cfg.sybil.attacker;
    spec.num_sybils = cfg.sybil.num_sybils;
    spec.attack_edges = cfg.sybil.attack_edges;
    spec.internal_topology = cfg.sybil.topology;
    g = attach_sybil_region(g, spec, root.fork(kStreamSybil).next());
  }
  if (cfg.view_size > g.node_count()) {
    throw ConfigError("config field 'view_size': exceeds the node count");
  }

  const RoleAssignment roles = assign_roles(g, first_sybil, cfg, root);
  if (cfg.pre_trusted_size > 0 && roles.instant_classifiers.size() < cfg.pre_trusted_size + 1u) {
    throw ConfigError(
        "config field 'pre_trusted_size': needs more instant classifiers than pre-trusted slots");
  }
  const std::vector<ViewSet> views =
      sample_views(g, cfg.view_size, cfg.pre_trusted_size, roles.instant_classifiers, root);

  // Identity uniqueness is an offline batch, recomputed only when the graph
  // changes (here: once, after any Sybil attachment).
  SybilLimitParams id_params;
  id_params.l = cfg.id_l;
  id_params.r = cfg.id_r;
  id_params.w = cfg.id_w;
  id_params.seed = root.fork(kStreamIds).next();
  const IdentityResult ids = compute_identity_uniqueness(g, id_params);

  const Workload workload = generate_workload(g, roles, cfg, root);

  SimResult result;
  result.node_count = g.node_count();
  result.first_sybil = first_sybil;
  result.identity_scores.reserve(ids.scores.size());
  for (const auto& s : ids.scores) result.identity_scores.push_back(s.id);

  if (cfg.engine != Engine::kOstra) {
    SocialFilterEngine engine(g, roles, views, result.identity_scores, cfg, root);
    result.timelines.push_back(
        engine.run(workload, cfg.trace_decisions ? &result.sf_trace : nullptr));
  }
  if (cfg.engine != Engine::kSocialFilter) {
    OstraEngine engine(g, roles, cfg);
    result.timelines.push_back(engine.run(workload));
  }
  return result;
}

}  // namespace socialfilter
