#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "socialfilter/repository.hpp"
#include "socialfilter/social_graph.hpp"
#include "socialfilter/view.hpp"

namespace socialfilter {

/// Similarity of two report confidences, 1 - |c_i - c_j|.
double report_similarity(double c_i, double c_j);

/// Exponential-moving-average trust update: alpha * d_k + (1 - alpha) * v.
double update_direct_trust(double d_k, double v_next, double alpha);

/// A node's reporter trust graph: the directed, direct-trust-weighted graph
/// over its view. Absent pairs weigh 0; zero-weight edges are implicit.
/// Snapshots are immutable once built and safe for parallel queries.
class TrustGraph {
 public:
  explicit TrustGraph(std::vector<NodeId> nodes);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  bool contains(NodeId v) const { return index_.count(v) > 0; }

  void set_direct_trust(NodeId from, NodeId to, double d);
  double direct_trust(NodeId from, NodeId to) const;

  /// Eq.-2 reporter trust: the maximum product of direct-trust weights over
  /// any path from i to j. rt_ii = 1; 0 when no positive-weight path exists.
  double reporter_trust(NodeId i, NodeId j) const;

  /// Single-source variant; agrees pointwise with reporter_trust.
  std::unordered_map<NodeId, double> reporter_trust_all(NodeId i) const;

  /// CSV export: "from,to,d,k" (k from the paired verification counter, 0
  /// when the graph was assembled without one).
  void write_csv(std::ostream& out,
                 const std::function<std::uint32_t(NodeId, NodeId)>& k_of = {}) const;

 private:
  std::uint32_t index_of(NodeId v) const;
  std::vector<double> widest_from(std::uint32_t src) const;

  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::uint32_t> index_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out_;  // positive edges only
};

/// Assembles the view's trust graph from a store snapshot: published values
/// for peers, live values for the owner's own edges, with the owner's
/// social-trust initialization already seeded into the store.
TrustGraph build_trust_graph(NodeId owner, const std::vector<NodeId>& view,
                             const TrustUpdateStore& store);

/// Scratch space for repeated in-place trust queries over one view.
class TrustScratch {
 public:
  void resize(std::uint32_t n);
  void reset_touched();

  std::vector<double> best;          // widest product per node id
  std::vector<std::uint8_t> target;
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> target_touched;
};

/// Store-backed equivalents of the TrustGraph queries, used on hot paths to
/// avoid materializing per-node graphs. Semantics match build_trust_graph +
/// reporter_trust exactly (owner edges read live, peer edges published).
///
/// Returns true as soon as any node of `targets` is reachable from the view
/// owner through positive-weight edges.
bool store_trust_reachable(const ViewSet& view, const TrustUpdateStore& store,
                           std::span<const NodeId> targets, TrustScratch& scratch);

/// Widest-product distances from the view owner, written into scratch.best
/// (indexed by node id; consult scratch.touched for the settled set). When
/// `targets` is nonempty the search stops once every target is settled.
void store_reporter_trust(const ViewSet& view, const TrustUpdateStore& store,
                          std::span<const NodeId> targets, TrustScratch& scratch);

}  // namespace socialfilter
