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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "sra/crm.hpp"
#include "sra/engine.hpp"
#include "sra/graph.hpp"
#include "sra/harness.hpp"
#include "sra/types.hpp"

using namespace sra;

namespace {

std::vector<int> ids_to_idx(const Instance& in,
                            const std::vector<std::string>& ids) {
  std::vector<int> out;
  for (const auto& id : ids) out.push_back(in.index_of(id));
  return out;
}

// Spanning-tree well-formedness: every valid node reachable via parent
// links that are edges of g, seller as the unique root.
void require_spanning(const ValidSubgraph& g, const SpanningTree& t) {
  REQUIRE(t.parent.size() == g.valid.size());
  CHECK(t.parent[0] == -1);
  for (int u : g.nodes) {
    if (u == 0) continue;
    REQUIRE(t.parent[u] >= 0);
    CHECK(g.has_edge(u, t.parent[u]));
    int cur = u;
    int hops = 0;
    while (cur != 0 && hops <= static_cast<int>(g.nodes.size())) {
      cur = t.parent[cur];
      ++hops;
    }
    CHECK(cur == 0);
  }
  for (std::size_t u = 0; u < g.valid.size(); ++u) {
    if (!g.valid[u]) CHECK(t.parent[u] == -1);
  }
}

std::string tree_key(const SpanningTree& t) {
  std::string key;
  for (int p : t.parent) key += std::to_string(p) + ",";
  return key;
}

}  // namespace

TEST_CASE("one-sided mentions create edges") {
  const Instance in = fixtures::instance_a();
  const int a = fixtures::idx(in, "a");
  const int b = fixtures::idx(in, "b");

  Report report = truthful_report(in);
  // a hides b, but b still lists a: the edge survives.
  std::erase(report.invited[a], b);
  ValidSubgraph g = build_valid_subgraph(in, report);
  CHECK(g.valid[b] == 1);
  CHECK(g.has_edge(a, b));
  CHECK(g.has_edge(b, a));

  // Both sides hide the edge: b drops out of the sale entirely.
  std::erase(report.invited[b], a);
  g = build_valid_subgraph(in, report);
  CHECK(g.valid[b] == 0);
  CHECK(g.adj[b].empty());
  CHECK(!g.has_edge(a, b));
  CHECK(std::find(g.nodes.begin(), g.nodes.end(), b) == g.nodes.end());
  CHECK(g.valid[a] == 1);
  CHECK(g.valid[fixtures::idx(in, "c")] == 1);
}

TEST_CASE("clusters detached from the seller are invalid") {
  const Instance in = make_instance(
      "S", {{"a", 3, {"S"}}, {"d", 5, {"e"}}, {"e", 7, {"d"}}});
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  CHECK(g.valid[in.index_of("a")] == 1);
  CHECK(g.valid[in.index_of("d")] == 0);
  CHECK(g.valid[in.index_of("e")] == 0);
  CHECK(g.nodes == std::vector<int>{0, in.index_of("a")});
  CHECK(g.edge_count == 1);
}

TEST_CASE("has_edge rejects out-of-range nodes") {
  const Instance in = fixtures::single_buyer();
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  CHECK(!g.has_edge(-1, 0));
  CHECK(!g.has_edge(0, 99));
  CHECK(g.has_edge(0, 1));
}

TEST_CASE("spanning tree counts on known networks") {
  auto count_of = [](const Instance& in) {
    return count_spanning_trees(build_valid_subgraph(in, truthful_report(in)));
  };
  CHECK(count_of(fixtures::triangle()) == 3);
  CHECK(count_of(fixtures::four_cycle()) == 4);
  CHECK(count_of(fixtures::line()) == 1);
  CHECK(count_of(fixtures::star()) == 1);
  CHECK(count_of(fixtures::single_buyer()) == 1);
  CHECK(count_of(fixtures::instance_a()) == 1);
  CHECK(count_of(fixtures::instance_b()) == 4);
  CHECK(count_of(fixtures::grid13()) == 126);
}

TEST_CASE("enumeration emits each spanning tree exactly once") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance in = random_instance(3 + static_cast<int>(seed % 5),
                                        static_cast<int>(seed % 4), seed);
    const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
    const long long expect = count_spanning_trees(g);
    const auto trees = enumerate_spanning_trees(g);
    REQUIRE(static_cast<long long>(trees.size()) == expect);
    std::set<std::string> seen;
    for (const auto& t : trees) {
      require_spanning(g, t);
      CHECK(seen.insert(tree_key(t)).second);
    }
  }
}

TEST_CASE("enumeration above the cap throws with a sampling hint") {
  const Instance in = fixtures::triangle();
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  CHECK_THROWS_AS(enumerate_spanning_trees(g, 2), EnumerationCapExceeded);
  try {
    enumerate_spanning_trees(g, 2);
  } catch (const EnumerationCapExceeded& e) {
    const std::string what = e.what();
    CHECK(what.find("3 spanning trees") != std::string::npos);
    CHECK(what.find("sampling") != std::string::npos);
  }
}

TEST_CASE("sampled trees are spanning, deterministic, and near uniform") {
  const Instance in = fixtures::instance_b();
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));

  const SpanningTree once = sample_spanning_tree(g, 42);
  const SpanningTree twice = sample_spanning_tree(g, 42);
  CHECK(once.parent == twice.parent);

  std::map<std::string, int> freq;
  const int draws = 4000;
  for (int s = 0; s < draws; ++s) {
    const SpanningTree t = sample_spanning_tree(g, 1000 + s);
    require_spanning(g, t);
    ++freq[tree_key(t)];
  }
  REQUIRE(freq.size() == 4);
  // Each of the four trees carries probability 1/4; 1000 +- 150 is well
  // beyond five standard deviations of slack.
  for (const auto& [key, n] : freq) {
    CHECK(n > 850);
    CHECK(n < 1150);
  }
}

TEST_CASE("shortcut edges disqualify a resale path") {
  // Path S-a-b-c-z with shortcuts S-c and a-z.
  const Instance in = make_instance("S", {{"a", 1, {"S", "b", "z"}},
                                          {"b", 2, {"c"}},
                                          {"c", 3, {"S", "z"}},
                                          {"z", 4, {}}});
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  const auto path = ids_to_idx(in, {"S", "a", "b", "c", "z"});
  CHECK(!is_diffusion_path(g, path));
  CHECK(is_diffusion_path(g, ids_to_idx(in, {"S", "c", "z"})));

  const auto fixed = transform_to_diffusion_path(g, path);
  CHECK(fixed == ids_to_idx(in, {"S", "c", "z"}));
  CHECK(is_diffusion_path(g, fixed));
}

TEST_CASE("splicing prefers the earliest start and the longest jump") {
  // Path S-a-b-c with both S-b and S-c available: the S-c shortcut is
  // taken because it leaves the earliest node with the longest jump.
  const Instance in = make_instance(
      "S", {{"a", 1, {"S", "b"}}, {"b", 2, {"S", "c"}}, {"c", 3, {"S"}}});
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  const auto fixed =
      transform_to_diffusion_path(g, ids_to_idx(in, {"S", "a", "b", "c"}));
  CHECK(fixed == ids_to_idx(in, {"S", "c"}));
}

TEST_CASE("transform fixes interior shortcuts too") {
  // S-a-b-c with shortcut a-c only.
  const Instance in = make_instance(
      "S", {{"a", 1, {"S", "b", "c"}}, {"b", 2, {"c"}}, {"c", 3, {}}});
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  const auto fixed =
      transform_to_diffusion_path(g, ids_to_idx(in, {"S", "a", "b", "c"}));
  CHECK(fixed == ids_to_idx(in, {"S", "a", "c"}));
  CHECK(is_diffusion_path(g, fixed));
}

TEST_CASE("transform keeps a clean path untouched") {
  const Instance in = fixtures::line();
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  const auto path = ids_to_idx(in, {"S", "a", "b", "c"});
  CHECK(is_diffusion_path(g, path));
  CHECK(transform_to_diffusion_path(g, path) == path);
}

TEST_CASE("excluded sets on the diamond") {
  const Instance in = fixtures::instance_b();
  const Report report = truthful_report(in);
  const DiffusionGraph dg = run_stage1_diffusion(in, report);
  const int a = fixtures::idx(in, "a");
  const int b = fixtures::idx(in, "b");
  const int c = fixtures::idx(in, "c");

  // The tree where b hangs under a.
  SpanningTree tree;
  tree.parent.assign(in.size(), -1);
  tree.parent[a] = 0;
  tree.parent[c] = 0;
  tree.parent[b] = a;
  const std::vector<int> path{0, a, b};

  CHECK(excluded_set(tree, dg.invitees, path, 1) == std::vector<int>{c});
  CHECK(excluded_set(tree, dg.invitees, path, 2) == std::vector<int>{a, c});

  const auto all = excluded_sets_by_recurrence(tree, dg.invitees, path);
  REQUIRE(all.size() == 3);
  CHECK(all[1] == std::vector<int>{c});
  CHECK(all[2] == std::vector<int>{a, c});
}

TEST_CASE("excluded sets on a line leave nothing behind but the hosts") {
  const Instance in = fixtures::line();
  const Report report = truthful_report(in);
  const DiffusionGraph dg = run_stage1_diffusion(in, report);
  const auto trees = enumerate_spanning_trees(
      build_valid_subgraph(in, truthful_report(in)));
  REQUIRE(trees.size() == 1);
  const auto path = ids_to_idx(in, {"S", "a", "b", "c"});

  CHECK(excluded_set(trees[0], dg.invitees, path, 1).empty());
  CHECK(excluded_set(trees[0], dg.invitees, path, 2) ==
        ids_to_idx(in, {"a"}));
  CHECK(excluded_set(trees[0], dg.invitees, path, 3) ==
        ids_to_idx(in, {"a", "b"}));
}

TEST_CASE("excluded_set validates its arguments") {
  const Instance in = fixtures::line();
  const DiffusionGraph dg = run_stage1_diffusion(in, truthful_report(in));
  const auto trees = enumerate_spanning_trees(
      build_valid_subgraph(in, truthful_report(in)));
  const auto path = ids_to_idx(in, {"S", "a"});
  CHECK_THROWS_AS(excluded_set(trees[0], dg.invitees, path, 0),
                  std::out_of_range);
  CHECK_THROWS_AS(excluded_set(trees[0], dg.invitees, path, 2),
                  std::out_of_range);
  CHECK_THROWS_AS(excluded_set(trees[0], dg.invitees, {1, 0}, 1),
                  std::out_of_range);
  CHECK_THROWS_AS(
      excluded_set(trees[0], std::vector<std::vector<int>>(2), path, 1),
      InputError);
}

TEST_CASE("the two excluded-set routes agree on realized forests") {
  // Forests the process itself can realize hang every buyer under one of
  // her inviters.  There the subtree-complement route and the recurrence
  // coincide along the resale path; trees with other edge kinds are
  // exactly where they must differ, which the resale tests pin down.
  long long paths_checked = 0;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const Instance in = random_instance(3 + static_cast<int>(seed % 4),
                                        static_cast<int>(seed % 3), seed);
    const Report report = truthful_report(in);
    const DiffusionGraph dg = run_stage1_diffusion(in, report);
    const int n = in.size();
    std::vector<int> choice(n, 0);
    for (bool more = true; more;) {
      SpanningTree tree;
      tree.parent.assign(n, -1);
      for (int i = 1; i < n; ++i) {
        if (dg.depth[i] >= 1) tree.parent[i] = dg.inviters[i][choice[i]];
      }
      const TreeOutcome out =
          closed_form_tree_outcome(in, report, dg, tree, TieBreak{});
      if (out.path.size() >= 2) {
        const auto sets =
            excluded_sets_by_recurrence(tree, dg.invitees, out.path);
        for (int j = 1; j < static_cast<int>(out.path.size()); ++j) {
          CHECK(excluded_set(tree, dg.invitees, out.path, j) == sets[j]);
          ++paths_checked;
        }
        // Monotone growth: each hand-off strands more of the network.
        for (int j = 2; j < static_cast<int>(out.path.size()); ++j) {
          CHECK(std::includes(sets[j].begin(), sets[j].end(),
                              sets[j - 1].begin(), sets[j - 1].end()));
        }
      }
      more = false;
      for (int i = 1; i < n && !more; ++i) {
        if (dg.depth[i] < 1) continue;
        if (++choice[i] < static_cast<int>(dg.inviters[i].size())) {
          more = true;
        } else {
          choice[i] = 0;
        }
      }
    }
  }
  CHECK(paths_checked > 50);
}
