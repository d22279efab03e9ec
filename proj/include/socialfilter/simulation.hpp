#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socialfilter/aggregator.hpp"
#include "socialfilter/rng.hpp"
#include "socialfilter/social_graph.hpp"
#include "socialfilter/sybil_limit.hpp"
#include "socialfilter/view.hpp"

namespace socialfilter {

enum class Engine : std::uint8_t { kSocialFilter, kOstra, kBoth };

struct GraphSpec {
  std::string file;  // when set, overrides the synthetic parameters
  std::uint32_t n = 5000;
  std::uint32_t k = 16;
  double beta = 0.1;
};

/// Optional Sybil-region adversary; members both spam and report falsely.
struct SybilSimSpec {
  std::uint32_t num_sybils = 0;  // 0 disables the attack
  std::uint32_t attack_edges = 1;
  NodeId attacker = 0;
  SybilTopology topology = SybilTopology::kClique;
};

struct SimConfig {
  GraphSpec graph;
  double sim_hours = 170.0;

  // Workload
  double legit_rate = 3.0;  // emails per user per day
  double dest_friend = 0.80;
  double dest_friend_of_friend = 0.13;
  double dest_random = 0.07;
  double spammer_fraction = 0.005;
  double spam_rate = 500.0;  // spam emails per spammer per day
  double instant_classifier_fraction = 0.10;
  double human_delay_mean_hours = 2.0;

  // SocialFilter
  std::uint32_t view_size = 500;
  std::uint32_t pre_trusted_size = 20;
  double threshold = 0.5;
  double alpha = 0.5;
  double validity_window_days = 14.0;
  double epsilon = 0.05;
  double sync_interval_hours = 1.0;
  double p_verify = 0.0;
  std::uint32_t id_l = 32;
  std::uint32_t id_r = 0;  // 0 = ceil(sqrt(m))
  std::uint32_t id_w = 0;  // 0 = ceil(log2(n))

  // Ostra
  int ostra_credit_bound = 5;

  // Adversary
  double false_reporter_fraction = 0.0;
  double false_report_rate = 3.0;  // false reports per reporter per day
  SybilSimSpec sybil;

  Engine engine = Engine::kSocialFilter;
  std::uint64_t seed = 1;
  bool trace_decisions = false;

  void validate() const;  // throws ConfigError naming the offending field
};

struct MetricsRow {
  std::uint32_t sim_hour = 0;
  std::uint64_t spam_sent = 0;
  std::uint64_t spam_blocked = 0;
  std::uint64_t legit_sent = 0;
  std::uint64_t legit_blocked = 0;
};

struct EngineTimeline {
  std::string engine;
  std::vector<MetricsRow> rows;

  std::uint64_t total_spam_sent() const;
  std::uint64_t total_spam_blocked() const;
  std::uint64_t total_legit_sent() const;
  std::uint64_t total_legit_blocked() const;

  /// Cumulative percentages over the whole run (0 when nothing was sent).
  double final_blocked_spam_pct() const;
  double final_blocked_legit_pct() const;
};

struct SimResult {
  std::vector<EngineTimeline> timelines;
  std::vector<double> identity_scores;      // per node, post-attachment
  std::vector<DecisionTraceRow> sf_trace;   // populated when trace_decisions
  std::uint32_t node_count = 0;
  std::uint32_t first_sybil = 0;  // == node_count when no Sybil region

  const EngineTimeline& timeline(const std::string& engine) const;

  /// CSV: "sim_hour,engine,spam_sent,spam_blocked,legit_sent,legit_blocked".
  void write_csv(std::ostream& out) const;
};

enum class Role : std::uint8_t { kHonest, kSpammer, kFalseReporter, kSybil };

struct RoleAssignment {
  std::vector<Role> roles;
  std::vector<ClassifierKind> classifiers;
  std::vector<NodeId> spammers;          // sybil members included
  std::vector<NodeId> false_reporters;   // sybil members included
  std::vector<NodeId> instant_classifiers;
  std::vector<NodeId> honest_targets;    // legitimate hosts for false reports
  std::vector<NodeId> colluder_of;       // per node: the partner a false
                                         // reporter shields (UINT32_MAX none)

  bool adversarial(NodeId v) const { return roles[v] != Role::kHonest; }
};

/// Folds the adversary options of cfg into concrete per-node behaviors.
RoleAssignment assign_roles(const SocialGraph& g, std::uint32_t first_sybil,
                            const SimConfig& cfg, Rng rng);

/// Uniform views: owner + random members + a random pre-trusted subset of
/// the instant classifiers. view_size clamps to the node count.
std::vector<ViewSet> sample_views(const SocialGraph& g, std::uint32_t view_size,
                                  std::uint32_t pre_trusted_size,
                                  const std::vector<NodeId>& instant_classifiers, Rng rng);

/// Deterministic discrete-event run of the configured engines over one
/// common workload.
SimResult run_simulation(const SimConfig& cfg);

}  // namespace socialfilter
