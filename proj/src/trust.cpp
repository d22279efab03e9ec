#include "socialfilter/trust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <queue>
#include <tuple>

#include "socialfilter/errors.hpp"

namespace socialfilter {

double report_similarity(double c_i, double c_j) {
  if (c_i < 0.0 || c_i > 1.0 || c_j < 0.0 || c_j > 1.0) {
    throw DomainError("report confidence out of [0,1]");
  }
  return 1.0 - std::abs(c_i - c_j);
}

double update_direct_trust(double d_k, double v_next, double alpha) {
  if (d_k < 0.0 || d_k > 1.0) throw DomainError("direct trust out of [0,1]");
  if (v_next < 0.0 || v_next > 1.0) throw DomainError("similarity out of [0,1]");
  if (alpha < 0.0 || alpha > 1.0) throw DomainError("alpha out of [0,1]");
  return alpha * d_k + (1.0 - alpha) * v_next;
}

TrustGraph::TrustGraph(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
  index_.reserve(nodes_.size());
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second) {
      throw DomainError("duplicate node in trust graph");
    }
  }
  out_.resize(nodes_.size());
}

std::uint32_t TrustGraph::index_of(NodeId v) const {
  const auto it = index_.find(v);
  if (it == index_.end()) throw DomainError("node " + std::to_string(v) + " outside view");
  return it->second;
}

void TrustGraph::set_direct_trust(NodeId from, NodeId to, double d) {
  if (d < 0.0 || d > 1.0) throw DomainError("direct trust out of [0,1]");
  const std::uint32_t fi = index_of(from);
  const std::uint32_t ti = index_of(to);
  auto& edges = out_[fi];
  const auto it = std::find_if(edges.begin(), edges.end(),
                               [&](const auto& e) { return e.first == ti; });
  if (d == 0.0) {
    if (it != edges.end()) edges.erase(it);
  } else if (it != edges.end()) {
    it->second = d;
  } else {
    edges.emplace_back(ti, d);
  }
}

double TrustGraph::direct_trust(NodeId from, NodeId to) const {
  const std::uint32_t fi = index_of(from);
  const std::uint32_t ti = index_of(to);
  for (const auto& [t, d] : out_[fi]) {
    if (t == ti) return d;
  }
  return 0.0;
}

std::vector<double> TrustGraph::widest_from(std::uint32_t src) const {
  std::vector<double> best(nodes_.size(), 0.0);
  best[src] = 1.0;
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item> heap;
  heap.emplace(1.0, src);
  while (!heap.empty()) {
    const auto [p, u] = heap.top();
    heap.pop();
    if (p < best[u]) continue;  // stale
    for (const auto& [v, w] : out_[u]) {
      const double cand = p * w;
      if (cand > best[v]) {
        best[v] = cand;
        heap.emplace(cand, v);
      }
    }
  }
  return best;
}

double TrustGraph::reporter_trust(NodeId i, NodeId j) const {
  const std::uint32_t si = index_of(i);
  const std::uint32_t ti = index_of(j);
  if (si == ti) return 1.0;
  return widest_from(si)[ti];
}

std::unordered_map<NodeId, double> TrustGraph::reporter_trust_all(NodeId i) const {
  const auto best = widest_from(index_of(i));
  std::unordered_map<NodeId, double> out;
  out.reserve(nodes_.size());
  for (std::uint32_t k = 0; k < nodes_.size(); ++k) out[nodes_[k]] = best[k];
  return out;
}

void TrustGraph::write_csv(std::ostream& out,
                           const std::function<std::uint32_t(NodeId, NodeId)>& k_of) const {
  out << "from,to,d,k\n";
  std::vector<std::tuple<NodeId, NodeId, double>> rows;
  for (std::uint32_t fi = 0; fi < nodes_.size(); ++fi) {
    for (const auto& [ti, d] : out_[fi]) rows.emplace_back(nodes_[fi], nodes_[ti], d);
  }
  std::sort(rows.begin(), rows.end());
  char buf[80];
  for (const auto& [from, to, d] : rows) {
    std::snprintf(buf, sizeof(buf), "%u,%u,%.9f,%u", from, to, d,
                  k_of ? k_of(from, to) : 0u);
    out << buf << '\n';
  }
}

TrustGraph build_trust_graph(NodeId owner, const std::vector<NodeId>& view,
                             const TrustUpdateStore& store) {
  TrustGraph tg(view);
  for (const NodeId u : view) {
    for (const auto& entry : store.out_edges(u)) {
      if (!tg.contains(entry.to) || entry.to == u) continue;
      const double d = u == owner ? entry.live : store.published_value(entry);
      if (d > 0.0) tg.set_direct_trust(u, entry.to, d);
    }
  }
  return tg;
}

void TrustScratch::resize(std::uint32_t n) {
  if (best.size() < n) {
    best.resize(n, 0.0);
    target.resize(n, 0);
  }
}

void TrustScratch::reset_touched() {
  for (const std::uint32_t v : touched) best[v] = 0.0;
  touched.clear();
  for (const std::uint32_t v : target_touched) target[v] = 0;
  target_touched.clear();
}

bool store_trust_reachable(const ViewSet& view, const TrustUpdateStore& store,
                           std::span<const NodeId> targets, TrustScratch& scratch) {
  scratch.reset_touched();
  bool any_target = false;
  for (const NodeId t : targets) {
    scratch.target[t] = 1;
    scratch.target_touched.push_back(t);
    any_target = true;
  }
  if (!any_target) return false;

  const NodeId owner = view.owner;
  // best doubles as the visited flag here.
  scratch.best[owner] = 1.0;
  scratch.touched.push_back(owner);
  std::vector<NodeId> frontier{owner};
  std::vector<NodeId> next;
  while (!frontier.empty()) {
    next.clear();
    for (const NodeId u : frontier) {
      for (const auto& entry : store.out_edges(u)) {
        const NodeId v = entry.to;
        if (scratch.best[v] != 0.0 || !view.contains(v)) continue;
        const double d = u == owner ? entry.live : store.published_value(entry);
        if (d <= 0.0) continue;
        if (scratch.target[v]) return true;
        scratch.best[v] = 1.0;
        scratch.touched.push_back(v);
        next.push_back(v);
      }
    }
    frontier.swap(next);
  }
  return false;
}

void store_reporter_trust(const ViewSet& view, const TrustUpdateStore& store,
                          std::span<const NodeId> targets, TrustScratch& scratch) {
  scratch.reset_touched();
  std::size_t remaining = 0;
  for (const NodeId t : targets) {
    if (!scratch.target[t]) {
      scratch.target[t] = 1;
      scratch.target_touched.push_back(t);
      ++remaining;
    }
  }

  const NodeId owner = view.owner;
  scratch.best[owner] = 1.0;
  scratch.touched.push_back(owner);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item> heap;
  heap.emplace(1.0, owner);
  while (!heap.empty()) {
    const auto [p, u] = heap.top();
    heap.pop();
    if (p < scratch.best[u]) continue;
    if (scratch.target[u] && scratch.target[u] != 2) {
      scratch.target[u] = 2;  // settled
      if (--remaining == 0 && !targets.empty()) return;
    }
    for (const auto& entry : store.out_edges(u)) {
      const NodeId v = entry.to;
      if (!view.contains(v)) continue;
      const double d = u == owner ? entry.live : store.published_value(entry);
      if (d <= 0.0) continue;
      const double cand = p * d;
      if (cand > scratch.best[v]) {
        if (scratch.best[v] == 0.0) scratch.touched.push_back(v);
        scratch.best[v] = cand;
        heap.emplace(cand, v);
      }
    }
  }
}

}  // namespace socialfilter
