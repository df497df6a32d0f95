// Copyright 2026 The SRA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sra/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "sra/rng.hpp"

namespace sra {

namespace {

// Union-find with undo.  No path compression, so joins can be rolled back
// in LIFO order by the enumeration below.
struct RollbackDsu {
  std::vector<int> parent;
  std::vector<int> size;
  std::vector<int> absorbed;

  explicit RollbackDsu(int n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) const {
    while (parent[x] != x) x = parent[x];
    return x;
  }

  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    absorbed.push_back(b);
    return true;
  }

  void undo() {
    const int b = absorbed.back();
    absorbed.pop_back();
    size[parent[b]] -= size[b];
    parent[b] = b;
  }
};

// Nodes below `root`, root included, following child pointers derived from
// `parent`.  A visited set keeps the walk finite on malformed inputs.
std::vector<int> subtree_members(const std::vector<int>& parent, int root) {
  const int n = static_cast<int>(parent.size());
  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i) {
    if (parent[i] >= 0) children[parent[i]].push_back(i);
  }
  std::vector<int> out;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (int c : children[u]) {
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return out;
}

void check_path(const std::vector<int>& path, std::size_t n) {
  if (path.empty() || path.front() != 0) {
    throw std::out_of_range("resale path must start at the seller");
  }
  for (int node : path) {
    if (node < 0 || static_cast<std::size_t>(node) >= n) {
      throw std::out_of_range("resale path mentions an unknown node");
    }
  }
}

}  // namespace

bool ValidSubgraph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= adj.size() ||
      static_cast<std::size_t>(v) >= adj.size()) {
    return false;
  }
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

ValidSubgraph build_valid_subgraph(const Instance& instance,
                                   const Report& report) {
  const int n = instance.size();
  if (static_cast<int>(report.invited.size()) != n) {
    throw InputError("report does not cover every agent");
  }
  // One-sided mentions create the edge: hiding a neighbor only disconnects
  // her if she also hides you.
  std::vector<std::set<int>> mentions(n);
  for (int i = 0; i < n; ++i) {
    for (int j : report.invited[i]) {
      if (j < 0 || j >= n) {
        throw InputError("reported neighbor index out of range");
      }
      if (j == i) continue;
      mentions[i].insert(j);
      mentions[j].insert(i);
    }
  }

  ValidSubgraph g;
  g.valid.assign(n, 0);
  g.adj.assign(n, {});
  g.valid[0] = 1;
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int u : frontier) {
      for (int w : mentions[u]) {
        if (!g.valid[w]) {
          g.valid[w] = 1;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }

  for (int u = 0; u < n; ++u) {
    if (!g.valid[u]) continue;
    g.nodes.push_back(u);
    g.adj[u].assign(mentions[u].begin(), mentions[u].end());
    g.edge_count += static_cast<int>(g.adj[u].size());
  }
  g.edge_count /= 2;
  return g;
}

long long count_spanning_trees(const ValidSubgraph& g) {
  const int k = static_cast<int>(g.nodes.size());
  if (k <= 1) return 1;
  std::vector<int> pos(g.valid.size(), -1);
  for (int a = 0; a < k; ++a) pos[g.nodes[a]] = a;
  // Reduced Laplacian over the buyers; its determinant counts the trees.
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(k - 1, k - 1);
  for (int a = 1; a < k; ++a) {
    const int u = g.nodes[a];
    lap(a - 1, a - 1) = static_cast<double>(g.adj[u].size());
    for (int v : g.adj[u]) {
      const int b = pos[v];
      if (b >= 1) lap(a - 1, b - 1) -= 1.0;
    }
  }
  const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(lap).determinant();
  if (!(det < 9.0e18)) return std::numeric_limits<long long>::max();
  return std::max<long long>(0, std::llround(det));
}

void for_each_spanning_tree(
    const ValidSubgraph& g,
    const std::function<void(const SpanningTree&)>& fn) {
  const int n = static_cast<int>(g.valid.size());
  const int k = static_cast<int>(g.nodes.size());
  if (k <= 1) {
    SpanningTree t;
    t.parent.assign(n, -1);
    fn(t);
    return;
  }
  std::vector<std::pair<int, int>> edges;
  for (int u : g.nodes) {
    for (int v : g.adj[u]) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  const int m = static_cast<int>(edges.size());

  RollbackDsu dsu(n);
  int components = k;
  std::vector<int> chosen;

  auto emit = [&]() {
    std::vector<std::vector<int>> adj(n);
    for (int e : chosen) {
      adj[edges[e].first].push_back(edges[e].second);
      adj[edges[e].second].push_back(edges[e].first);
    }
    SpanningTree t;
    t.parent.assign(n, -1);
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          t.parent[v] = u;
          stack.push_back(v);
        }
      }
    }
    fn(t);
  };

  // Include/exclude recursion over the sorted edge list.  Each spanning
  // tree corresponds to exactly one decision path, and the feasibility
  // probe cuts branches whose remaining edges can no longer connect the
  // undecided components.
  std::function<void(int)> rec = [&](int idx) {
    if (components == 1) {
      emit();
      return;
    }
    if (idx == m) return;
    {
      RollbackDsu probe = dsu;
      int c = components;
      for (int e = idx; e < m && c > 1; ++e) {
        if (probe.join(edges[e].first, edges[e].second)) --c;
      }
      if (c > 1) return;
    }
    const auto [u, v] = edges[idx];
    if (dsu.find(u) != dsu.find(v)) {
      dsu.join(u, v);
      --components;
      chosen.push_back(idx);
      rec(idx + 1);
      chosen.pop_back();
      ++components;
      dsu.undo();
    }
    rec(idx + 1);
  };
  rec(0);
}

std::vector<SpanningTree> enumerate_spanning_trees(const ValidSubgraph& g,
                                                   long long cap) {
  const long long total = count_spanning_trees(g);
  if (total > cap) {
    throw EnumerationCapExceeded(
        "the network admits " + std::to_string(total) +
        " spanning trees, above the enumeration cap of " + std::to_string(cap) +
        "; evaluate by sampling instead (tree-samples > 0)");
  }
  std::vector<SpanningTree> out;
  out.reserve(static_cast<std::size_t>(total));
  for_each_spanning_tree(g, [&](const SpanningTree& t) { out.push_back(t); });
  return out;
}

SpanningTree sample_spanning_tree(const ValidSubgraph& g, std::uint64_t seed) {
  constexpr std::uint64_t kWalkTag = 0x74726565ULL;
  const int n = static_cast<int>(g.valid.size());
  SpanningTree t;
  t.parent.assign(n, -1);
  std::vector<char> in_tree(n, 0);
  in_tree[0] = 1;
  std::vector<int> next(n, -1);
  std::uint64_t counter = 0;
  // Loop-erased random walks from each node not yet attached.  Revisits
  // overwrite next[], which erases the loop implicitly.
  for (int s : g.nodes) {
    if (in_tree[s]) continue;
    int cur = s;
    while (!in_tree[cur]) {
      const auto& nb = g.adj[cur];
      next[cur] = nb[pick_index(mix(seed, kWalkTag, ++counter), nb.size())];
      cur = next[cur];
    }
    cur = s;
    while (!in_tree[cur]) {
      in_tree[cur] = 1;
      t.parent[cur] = next[cur];
      cur = next[cur];
    }
  }
  return t;
}

bool is_diffusion_path(const ValidSubgraph& g, const std::vector<int>& path) {
  const int len = static_cast<int>(path.size());
  for (int i = 0; i + 2 < len; ++i) {
    for (int j = i + 2; j < len; ++j) {
      if (g.has_edge(path[i], path[j])) return false;
    }
  }
  return true;
}

std::vector<int> transform_to_diffusion_path(const ValidSubgraph& g,
                                             std::vector<int> path) {
  for (;;) {
    const int len = static_cast<int>(path.size());
    int si = -1;
    int sj = -1;
    for (int i = 0; i + 2 < len && si < 0; ++i) {
      for (int j = len - 1; j > i + 1; --j) {
        if (g.has_edge(path[i], path[j])) {
          si = i;
          sj = j;
          break;
        }
      }
    }
    if (si < 0) return path;
    path.erase(path.begin() + si + 1, path.begin() + sj);
  }
}

std::vector<int> excluded_set(const SpanningTree& tree,
                              const std::vector<std::vector<int>>& invitees,
                              const std::vector<int>& path, int j) {
  check_path(path, tree.parent.size());
  if (invitees.size() != tree.parent.size()) {
    throw InputError("invitee table does not cover every agent");
  }
  if (j < 1 || j >= static_cast<int>(path.size())) {
    throw std::out_of_range("excluded_set step index out of range");
  }
  // Replay the hand-offs up to step j: every host pulls her own invitees
  // directly under herself, then path[j] walks away with her subtree.
  // Whoever is left is priced against path[j].
  std::vector<int> parent = tree.parent;
  for (int t = 0; t < j; ++t) {
    for (int inv : invitees[path[t]]) parent[inv] = path[t];
  }
  std::vector<char> carried(parent.size(), 0);
  for (int x : subtree_members(parent, path[j])) carried[x] = 1;
  std::vector<int> out;
  for (int i = 1; i < static_cast<int>(parent.size()); ++i) {
    if (parent[i] != -1 && !carried[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<int>> excluded_sets_by_recurrence(
    const SpanningTree& tree, const std::vector<std::vector<int>>& invitees,
    const std::vector<int>& path) {
  check_path(path, tree.parent.size());
  if (invitees.size() != tree.parent.size()) {
    throw InputError("invitee table does not cover every agent");
  }
  const int m = static_cast<int>(path.size());
  std::vector<int> parent = tree.parent;
  std::set<int> acc;
  std::vector<std::vector<int>> out(m);
  for (int t = 0; t + 1 < m; ++t) {
    const int host = path[t];
    for (int inv : invitees[host]) parent[inv] = host;
    if (t >= 1) acc.insert(host);
    for (int inv : invitees[host]) {
      if (inv == path[t + 1]) continue;
      for (int node : subtree_members(parent, inv)) acc.insert(node);
    }
    out[t + 1].assign(acc.begin(), acc.end());
  }
  return out;
}

}  // namespace sra
