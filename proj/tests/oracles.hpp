#pragma once

// Independent reference implementations used to check the library against
// first principles. Deliberately brute-force; none of this shares code with
// the implementation under test.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace oracles {

/// Max product over all simple paths s -> t, products folded left-to-right
/// in path order. Zero-weight edges count as absent. n is small (<= ~10).
inline double max_product_path(const std::vector<std::vector<double>>& w, std::uint32_t s,
                               std::uint32_t t) {
  const std::uint32_t n = static_cast<std::uint32_t>(w.size());
  if (s == t) return 1.0;
  std::vector<bool> used(n, false);
  double best = 0.0;
  used[s] = true;
  const std::function<void(std::uint32_t, double)> dfs = [&](std::uint32_t u, double p) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (used[v] || w[u][v] <= 0.0) continue;
      const double np = p * w[u][v];
      if (v == t) {
        if (np > best) best = np;
        continue;
      }
      used[v] = true;
      dfs(v, np);
      used[v] = false;
    }
  };
  dfs(s, 1.0);
  return best;
}

/// All simple paths s -> t as (product, edge count) pairs.
inline void all_paths(const std::vector<std::vector<double>>& w, std::uint32_t s, std::uint32_t t,
                      std::vector<std::pair<double, std::uint32_t>>& out) {
  const std::uint32_t n = static_cast<std::uint32_t>(w.size());
  std::vector<bool> used(n, false);
  used[s] = true;
  const std::function<void(std::uint32_t, double, std::uint32_t)> dfs =
      [&](std::uint32_t u, double p, std::uint32_t len) {
        for (std::uint32_t v = 0; v < n; ++v) {
          if (used[v] || w[u][v] <= 0.0) continue;
          const double np = p * w[u][v];
          if (v == t) {
            out.emplace_back(np, len + 1);
            continue;
          }
          used[v] = true;
          dfs(v, np, len + 1);
          used[v] = false;
        }
      };
  dfs(s, 1.0, 0);
}

/// Mean shortest-path hop count over all connected ordered pairs (BFS).
inline double mean_shortest_path(const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  std::uint64_t total = 0;
  std::uint64_t pairs = 0;
  std::vector<std::int32_t> dist(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<std::uint32_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::uint32_t u = q.front();
      q.pop();
      for (const std::uint32_t v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
      }
    }
    for (std::uint32_t t = 0; t < n; ++t) {
      if (t != s && dist[t] > 0) {
        total += static_cast<std::uint64_t>(dist[t]);
        ++pairs;
      }
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(pairs);
}

/// Edmonds-Karp max flow with unit edge capacities; equals the edge min-cut
/// between s and t by duality.
inline std::uint32_t unit_max_flow(std::uint32_t n,
                                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                   std::uint32_t s, std::uint32_t t) {
  std::vector<std::vector<std::uint32_t>> head(n);
  std::vector<std::uint32_t> to;
  std::vector<int> cap;
  const auto add = [&](std::uint32_t a, std::uint32_t b) {
    head[a].push_back(static_cast<std::uint32_t>(to.size()));
    to.push_back(b);
    cap.push_back(1);
    head[b].push_back(static_cast<std::uint32_t>(to.size()));
    to.push_back(a);
    cap.push_back(1);  // undirected: both directions carry capacity
  };
  for (const auto& [a, b] : edges) add(a, b);

  std::uint32_t flow = 0;
  while (true) {
    std::vector<std::int64_t> prev_edge(n, -1);
    std::vector<bool> seen(n, false);
    std::queue<std::uint32_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty() && !seen[t]) {
      const std::uint32_t u = q.front();
      q.pop();
      for (const std::uint32_t e : head[u]) {
        if (cap[e] <= 0 || seen[to[e]]) continue;
        seen[to[e]] = true;
        prev_edge[to[e]] = e;
        q.push(to[e]);
      }
    }
    if (!seen[t]) break;
    for (std::uint32_t v = t; v != s;) {
      const auto e = static_cast<std::uint32_t>(prev_edge[v]);
      cap[e] -= 1;
      cap[e ^ 1] += 1;
      v = to[e ^ 1];
    }
    ++flow;
  }
  return flow;
}

}  // namespace oracles
