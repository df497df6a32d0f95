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
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "sra/baselines.hpp"
#include "sra/graph.hpp"
#include "sra/harness.hpp"
#include "sra/types.hpp"

using namespace sra;
using doctest::Approx;

TEST_CASE("critical sequence on the chain fixture") {
  const Instance in = fixtures::instance_a();
  const int a = fixtures::idx(in, "a");
  const int b = fixtures::idx(in, "b");
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  const CriticalSequence seq = critical_sequence(g, b);
  CHECK(seq.nodes == std::vector<int>{a, b});
  REQUIRE(seq.dominated.size() == 2);
  CHECK(seq.dominated[0] == std::vector<int>{a, b});
  CHECK(seq.dominated[1] == std::vector<int>{b});
}

TEST_CASE("a two-connected network has no cut vertices") {
  const Instance in = fixtures::instance_b();
  const int b = fixtures::idx(in, "b");
  const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
  const CriticalSequence seq = critical_sequence(g, b);
  CHECK(seq.nodes == std::vector<int>{b});
  REQUIRE(seq.dominated.size() == 1);
  CHECK(seq.dominated[0] == std::vector<int>{b});
}

TEST_CASE("criticals are ordered by distance and their sets shrink") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Instance in = random_instance(3 + static_cast<int>(seed % 6),
                                        static_cast<int>(seed % 3), seed + 7);
    const ValidSubgraph g = build_valid_subgraph(in, truthful_report(in));
    for (int z : g.nodes) {
      if (z == 0) continue;
      const CriticalSequence seq = critical_sequence(g, z);
      REQUIRE(!seq.nodes.empty());
      CHECK(seq.nodes.back() == z);
      for (std::size_t k = 0; k < seq.nodes.size(); ++k) {
        const auto& dom = seq.dominated[k];
        // The removed node dominates itself and the target.
        CHECK(std::count(dom.begin(), dom.end(), seq.nodes[k]) == 1);
        CHECK(std::count(dom.begin(), dom.end(), z) == 1);
        if (k > 0) {
          // Later sets are strictly contained in earlier ones.
          const auto& prev = seq.dominated[k - 1];
          CHECK(std::includes(prev.begin(), prev.end(), dom.begin(),
                              dom.end()));
          CHECK(dom.size() < prev.size());
        }
      }
    }
  }
}

TEST_CASE("diffusion mechanism on the chain fixture") {
  const Instance in = fixtures::instance_a();
  const int a = fixtures::idx(in, "a");
  const int b = fixtures::idx(in, "b");
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.z == b);
  CHECK(out.sequence.nodes == std::vector<int>{a, b});
  // a's bid of 3 already tops everyone outside b's dependents, so the item
  // stops at a; she pays the best bid she does not dominate, c's 2.
  CHECK(out.winner == a);
  CHECK(out.payment[a] == 2);
  CHECK(out.payment[b] == 0);
  CHECK(out.revenue == 2);
}

TEST_CASE("diffusion mechanism reaches the top bidder when relays bid low") {
  const Instance in = make_instance(
      "S", {{"a", 1, {"S", "b"}}, {"b", 7, {}}, {"c", 2, {"S"}}});
  const int a = fixtures::idx(in, "a");
  const int b = fixtures::idx(in, "b");
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.winner == b);
  CHECK(out.payment[b] == 2);
  CHECK(out.payment[a] == 0);  // her reward 2 - 2 collapses to nothing
  CHECK(out.revenue == 2);
}

TEST_CASE("a relay earns a strictly positive diffusion reward") {
  // a's branch holds both the top bid and the price-setting 5, so handing
  // the item past a costs the seller everything: revenue 0, a nets -5.
  const Instance in = make_instance(
      "S", {{"a", 1, {"S", "b", "d"}}, {"b", 10, {}}, {"d", 5, {"a"}}});
  const int a = fixtures::idx(in, "a");
  const int b = fixtures::idx(in, "b");
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.winner == b);
  CHECK(out.payment[b] == 5);
  CHECK(out.payment[a] == -5);
  CHECK(out.revenue == 0);

  const OutcomeSummary s = to_summary(in, out);
  CHECK(s.utility[a] == 5);
  CHECK(s.utility[b] == 5);
  CHECK(s.utility[0] == 0);
  CHECK(s.win_prob[b] == 1);
}

TEST_CASE("diffusion mechanism on the diamond") {
  const Instance in = fixtures::instance_b();
  const int b = fixtures::idx(in, "b");
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.z == b);
  CHECK(out.winner == b);
  CHECK(out.payment[b] == 2);
  CHECK(out.revenue == 2);
}

TEST_CASE("diffusion mechanism on the twelve-buyer network") {
  const Instance in = fixtures::grid13();
  const int j = in.index_of("j");
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.z == j);
  CHECK(out.sequence.nodes == std::vector<int>{j});
  CHECK(out.winner == j);
  CHECK(out.payment[j] == Approx(0.97).epsilon(1e-12));
  CHECK(out.revenue == Approx(0.97).epsilon(1e-12));
  for (int i = 1; i < in.size(); ++i) {
    if (i != j) CHECK(out.payment[i] == 0);
  }
  const OutcomeSummary s = to_summary(in, out);
  CHECK(s.utility[j] == Approx(0.07).epsilon(1e-9));
  CHECK(s.utility[in.index_of("e")] == 0);
}

TEST_CASE("a lone buyer takes the item for free") {
  const Instance in = fixtures::single_buyer();
  const int a = fixtures::idx(in, "a");
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.winner == a);
  CHECK(out.payment[a] == 0);
  CHECK(out.revenue == 0);
}

TEST_CASE("only buyers connected through reports can win") {
  const Instance in = make_instance(
      "S", {{"a", 3, {"S"}}, {"d", 50, {"e"}}, {"e", 70, {"d"}}});
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.winner == fixtures::idx(in, "a"));
  CHECK(out.revenue == 0);
}

TEST_CASE("with no valid buyers the seller keeps the item") {
  const Instance in = make_instance("S", {});
  const IdmOutcome out = idm_run(in, truthful_report(in), 0);
  CHECK(out.winner == 0);
  CHECK(out.revenue == 0);
  const OutcomeSummary s = to_summary(in, out);
  CHECK(s.win_prob[0] == 1);
}

TEST_CASE("a shared top bid is designated by the seed, reproducibly") {
  const Instance in =
      make_instance("S", {{"a", 5, {"S"}}, {"b", 5, {"S"}}});
  std::set<int> designated;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    const IdmOutcome once = idm_run(in, truthful_report(in), seed);
    const IdmOutcome twice = idm_run(in, truthful_report(in), seed);
    CHECK(once.z == twice.z);
    CHECK(once.winner == once.z);
    designated.insert(once.z);
  }
  CHECK(designated ==
        std::set<int>{fixtures::idx(in, "a"), fixtures::idx(in, "b")});
}

TEST_CASE("diffusion payments always balance the revenue") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance in = random_instance(3 + static_cast<int>(seed % 6),
                                        static_cast<int>(seed % 4), seed + 31);
    const IdmOutcome out = idm_run(in, truthful_report(in), seed);
    double paid = 0;
    for (int i = 1; i < in.size(); ++i) paid += out.payment[i];
    CHECK(paid == Approx(out.revenue).epsilon(1e-12));
    // The walk stops no later than the top bidder herself.
    CHECK(out.winner > 0);
    CHECK(out.payment[out.winner] >= 0);
    for (int u : out.sequence.nodes) {
      if (u != out.winner) CHECK(out.payment[u] <= 0);
    }
  }
}

TEST_CASE("neighbor auction on the fixtures") {
  {
    const Instance in = fixtures::instance_a();
    const VcgOutcome out = vcg_neighbors(in, truthful_report(in));
    CHECK(out.winner == fixtures::idx(in, "a"));
    CHECK(out.price == 2);
    CHECK(out.revenue == 2);
  }
  {
    const Instance in = fixtures::instance_b();
    const VcgOutcome out = vcg_neighbors(in, truthful_report(in));
    CHECK(out.winner == fixtures::idx(in, "c"));
    CHECK(out.price == 1);
  }
  {
    const Instance in = fixtures::grid13();
    const VcgOutcome out = vcg_neighbors(in, truthful_report(in));
    CHECK(out.winner == in.index_of("b"));
    CHECK(out.price == Approx(0.31).epsilon(1e-12));
  }
}

TEST_CASE("neighbor auction edge cases") {
  // A single neighbor pays nothing.
  const VcgOutcome lone =
      vcg_neighbors(fixtures::single_buyer(), truthful_report(
          fixtures::single_buyer()));
  CHECK(lone.winner == 1);
  CHECK(lone.price == 0);

  // Ties go to the earliest neighbor in canonical order.
  const Instance tie = make_instance("S", {{"a", 5, {"S"}}, {"b", 5, {"S"}}});
  const VcgOutcome t = vcg_neighbors(tie, truthful_report(tie));
  CHECK(t.winner == fixtures::idx(tie, "a"));
  CHECK(t.price == 5);

  // No neighbors, no sale.
  const Instance empty = make_instance("S", {});
  const VcgOutcome none = vcg_neighbors(empty, truthful_report(empty));
  CHECK(none.winner == 0);
  CHECK(none.revenue == 0);

  // The neighbor auction sees reported lists: a seller neighbor who does
  // not report back is still reachable through the seller's own faithful
  // listing, but deeper buyers never take part.
  const Instance deep = fixtures::line(3, 7, 5);
  const VcgOutcome d = vcg_neighbors(deep, truthful_report(deep));
  CHECK(d.winner == fixtures::idx(deep, "a"));
  CHECK(d.price == 0);  // a is the only seller neighbor
}

TEST_CASE("summary conversion marks deterministic evaluation") {
  const Instance in = fixtures::instance_b();
  const OutcomeSummary idm = to_summary(in, idm_run(in, truthful_report(in),
                                                    0));
  CHECK(idm.exact);
  CHECK(idm.tree_count == 0);
  CHECK(idm.win_prob[fixtures::idx(in, "b")] == 1);
  CHECK(idm.utility[fixtures::idx(in, "b")] == 8);
  CHECK(idm.utility[0] == 2);

  const OutcomeSummary vcg =
      to_summary(in, vcg_neighbors(in, truthful_report(in)));
  CHECK(vcg.win_prob[fixtures::idx(in, "c")] == 1);
  CHECK(vcg.payment[fixtures::idx(in, "c")] == 1);
  CHECK(vcg.utility[fixtures::idx(in, "c")] == 1);
  CHECK(vcg.utility[0] == 1);
}
