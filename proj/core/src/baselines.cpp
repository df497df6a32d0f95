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

#include "sra/baselines.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "sra/rng.hpp"

namespace sra {
namespace {

// Same tag as the centralized mechanism's top-bidder designation, so the
// two resolve a shared-top-bid tie with the same draw.
constexpr std::uint64_t kDesignTag = 0x63726d7aULL;

// Nodes of the valid subgraph reachable from the seller when `removed` is
// taken out; removed < 0 removes nothing.
std::vector<char> reachable_without(const ValidSubgraph& g, int removed) {
  std::vector<char> seen(g.valid.size(), 0);
  if (removed == 0) return seen;
  seen[0] = 1;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : g.adj[u]) {
      if (v == removed || seen[v]) continue;
      seen[v] = 1;
      q.push(v);
    }
  }
  return seen;
}

}  // namespace

CriticalSequence critical_sequence(const ValidSubgraph& g, int z) {
  CriticalSequence seq;
  seq.z = z;
  std::vector<int> dist(g.valid.size(), -1);
  {
    std::queue<int> q;
    q.push(0);
    dist[0] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : g.adj[u]) {
        if (dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  for (int u : g.nodes) {
    if (u == 0 || u == z) continue;
    if (!reachable_without(g, u)[z]) seq.nodes.push_back(u);
  }
  // Cut vertices for z lie on every seller-to-z path, so their distances
  // from the seller are pairwise distinct; sorting by distance orders them
  // along that path.
  std::sort(seq.nodes.begin(), seq.nodes.end(),
            [&](int a, int b) { return dist[a] < dist[b]; });
  seq.nodes.push_back(z);
  for (int u : seq.nodes) {
    const std::vector<char> seen = reachable_without(g, u);
    std::vector<int> dom;
    for (int v : g.nodes) {
      if (v != 0 && (v == u || !seen[v])) dom.push_back(v);
    }
    seq.dominated.push_back(std::move(dom));
  }
  return seq;
}

IdmOutcome idm_run(const Instance& instance, const Report& report,
                   std::uint64_t seed) {
  const int n = instance.size();
  IdmOutcome out;
  out.payment.assign(n, 0.0);

  const ValidSubgraph g = build_valid_subgraph(instance, report);
  std::vector<int> buyers;
  for (int u : g.nodes) {
    if (u != 0) buyers.push_back(u);
  }
  if (buyers.empty()) return out;

  double best = -1.0;
  std::vector<int> tied;
  for (int u : buyers) {
    if (report.bids[u] > best) {
      best = report.bids[u];
      tied = {u};
    } else if (report.bids[u] == best) {
      tied.push_back(u);
    }
  }
  out.z = tied.size() == 1
              ? tied.front()
              : tied[pick_index(mix(seed, kDesignTag),
                                static_cast<int>(tied.size()))];
  out.sequence = critical_sequence(g, out.z);

  // Highest bid among valid buyers outside the dominated set of sequence
  // node k; k past the end excludes nothing.
  const auto top_outside = [&](int k) {
    std::vector<char> cut(n, 0);
    if (k < static_cast<int>(out.sequence.dominated.size())) {
      for (int v : out.sequence.dominated[k]) cut[v] = 1;
    }
    double top = 0.0;
    for (int u : buyers) {
      if (!cut[u]) top = std::max(top, report.bids[u]);
    }
    return top;
  };

  // The first cut vertex already bidding as much as everyone she does not
  // dominate after the next hand-off takes the item; the last entry is the
  // top bidder herself, who always qualifies.
  const int count = static_cast<int>(out.sequence.nodes.size());
  int m = count - 1;
  for (int k = 0; k < count; ++k) {
    if (report.bids[out.sequence.nodes[k]] == top_outside(k + 1)) {
      m = k;
      break;
    }
  }
  out.winner = out.sequence.nodes[m];
  out.payment[out.winner] = top_outside(m);
  for (int k = 0; k < m; ++k) {
    const int u = out.sequence.nodes[k];
    out.payment[u] = top_outside(k) - top_outside(k + 1);  // <= 0, a reward
  }
  out.revenue = top_outside(0);
  return out;
}

VcgOutcome vcg_neighbors(const Instance& instance, const Report& report) {
  (void)instance;
  VcgOutcome out;
  double first = -1.0;
  double second = -1.0;
  for (int u : report.invited[0]) {
    const double b = report.bids[u];
    if (b > first) {
      second = first;
      first = b;
      out.winner = u;
    } else if (b > second) {
      second = b;
    }
  }
  if (out.winner == 0) return out;
  out.price = std::max(second, 0.0);
  out.revenue = out.price;
  return out;
}

OutcomeSummary to_summary(const Instance& instance, const IdmOutcome& idm) {
  const int n = instance.size();
  OutcomeSummary s;
  s.win_prob.assign(n, 0.0);
  s.payment = idm.payment;
  s.payment.resize(n, 0.0);
  s.utility.assign(n, 0.0);
  s.win_prob[idm.winner] = 1.0;
  for (int i = 1; i < n; ++i) {
    const double value = i == idm.winner ? instance.valuations[i] : 0.0;
    s.utility[i] = value - s.payment[i];
  }
  s.revenue = idm.revenue;
  s.utility[0] = s.revenue;
  s.tree_count = 0;
  s.exact = true;
  return s;
}

OutcomeSummary to_summary(const Instance& instance, const VcgOutcome& vcg) {
  const int n = instance.size();
  OutcomeSummary s;
  s.win_prob.assign(n, 0.0);
  s.payment.assign(n, 0.0);
  s.utility.assign(n, 0.0);
  s.win_prob[vcg.winner] = 1.0;
  if (vcg.winner != 0) {
    s.payment[vcg.winner] = vcg.price;
    s.utility[vcg.winner] = instance.valuations[vcg.winner] - vcg.price;
  }
  s.revenue = vcg.revenue;
  s.utility[0] = s.revenue;
  s.tree_count = 0;
  s.exact = true;
  return s;
}

}  // namespace sra
