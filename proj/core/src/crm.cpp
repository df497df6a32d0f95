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

#include "sra/crm.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sra/rng.hpp"

namespace sra {

namespace {

constexpr std::uint64_t kSampleTag = 0x63726d73ULL;  // per-sample stream
constexpr std::uint64_t kAssignTag = 0x63726d61ULL;  // inviter choice draws
constexpr std::uint64_t kDesignTag = 0x63726d7aULL;  // top-bidder designation

// Buyers whose reported bid is the highest among the informed.  When the
// top bid is shared, each of them can be the designated favorite; exact
// mode averages over them, sampling mode designates per draw.
std::vector<int> top_bidders(const Report& report, const DiffusionGraph& dg) {
  std::vector<int> tops;
  double best = -1;
  for (int i = 1; i < static_cast<int>(dg.depth.size()); ++i) {
    if (dg.depth[i] < 1) continue;
    if (report.bids[i] > best) {
      best = report.bids[i];
      tops.clear();
    }
    if (report.bids[i] == best) tops.push_back(i);
  }
  return tops;
}

std::vector<int> subtree_of(const std::vector<int>& parent, int root) {
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

struct WeightedOutcome {
  double weight = 0;
  TreeOutcome outcome;
};

void accumulate(OutcomeSummary& summary, const Instance& instance,
                const WeightedOutcome& wo) {
  const double w = wo.weight;
  const TreeOutcome& o = wo.outcome;
  summary.win_prob[o.winner] += w;
  for (int i = 1; i < instance.size(); ++i) {
    summary.payment[i] += w * o.payments[i];
    double u = -o.payments[i];
    if (o.winner == i) u += instance.valuations[i];
    summary.utility[i] += w * u;
  }
  summary.revenue += w * o.revenue;
  summary.utility[0] += w * o.revenue;
}

// Spanning tree induced by one inviter choice per informed buyer.
SpanningTree assignment_tree(const DiffusionGraph& dg,
                             const std::vector<int>& choice) {
  SpanningTree t;
  t.parent.assign(dg.depth.size(), -1);
  for (std::size_t i = 1; i < dg.depth.size(); ++i) {
    if (dg.depth[i] >= 1) t.parent[i] = dg.inviters[i][choice[i]];
  }
  return t;
}

}  // namespace

TreeDistribution parse_tree_distribution(const std::string& name) {
  if (name == "uniform" || name == "uniform-trees") {
    return TreeDistribution::kUniformTrees;
  }
  if (name == "invitation" || name == "invitation-weighted") {
    return TreeDistribution::kInvitationWeighted;
  }
  throw InputError("unknown tree distribution: " + name);
}

std::string distribution_name(TreeDistribution d) {
  return d == TreeDistribution::kUniformTrees ? "uniform-trees"
                                              : "invitation-weighted";
}

TreeOutcome evaluate_tree_resale(const Instance& instance,
                                 const Report& report,
                                 const DiffusionGraph& dg,
                                 const SpanningTree& tree,
                                 const TieBreak& tie) {
  const int n = instance.size();
  AggregationForest forest;
  forest.parents.assign(n, {});
  forest.bid.assign(n, 0.0);
  forest.received.assign(n, {});
  for (int i = 1; i < n; ++i) {
    if (tree.parent[i] >= 0) forest.parents[i] = {tree.parent[i]};
  }
  Stage3Options options;
  options.tie = tie;
  ResaleTrace trace = run_stage3_allocation(instance, report, dg,
                                            std::move(forest), nullptr,
                                            options);
  TreeOutcome out;
  out.path = trace.path;
  out.winner = trace.winner;
  out.payments = trace.payment;
  out.revenue = trace.revenue;
  return out;
}

TreeOutcome closed_form_tree_outcome(const Instance& instance,
                                     const Report& report,
                                     const DiffusionGraph& dg,
                                     const SpanningTree& tree,
                                     const TieBreak& tie) {
  const int n = instance.size();
  TreeOutcome out;
  out.payments.assign(n, 0.0);
  out.path.push_back(0);

  // March along argmax branches until nobody is left to invite.  The
  // aggregate a participant would show equals the top reported bid of her
  // branch once her host has pulled every own invitee directly under
  // herself, which is the same replay excluded_set performs.
  std::vector<int> parent = tree.parent;
  std::vector<int> march{0};
  for (int step = 0;; ++step) {
    const int host = march.back();
    for (int inv : dg.invitees[host]) parent[inv] = host;
    const auto& part = dg.invitees[host];
    if (part.empty()) break;
    std::vector<double> tops(part.size(), 0.0);
    double best = -1;
    for (std::size_t k = 0; k < part.size(); ++k) {
      for (int node : subtree_of(parent, part[k])) {
        tops[k] = std::max(tops[k], report.bids[node]);
      }
      best = std::max(best, tops[k]);
    }
    std::vector<int> tied;
    for (std::size_t k = 0; k < part.size(); ++k) {
      if (tops[k] == best) tied.push_back(part[k]);
    }
    int next = tied.front();
    if (tied.size() > 1) {
      int hit = -1;
      int hits = 0;
      if (tie.favored >= 0) {
        for (int t : tied) {
          for (int node : subtree_of(parent, t)) {
            if (node == tie.favored) {
              hit = t;
              ++hits;
              break;
            }
          }
        }
      }
      next = hits == 1 ? hit : tied[tie_draw(tie, host, step, tied.size())];
    }
    march.push_back(next);
  }

  const int last = static_cast<int>(march.size()) - 1;
  if (last == 0) return out;  // nobody to sell to; the seller keeps

  // Top excluded bid ahead of each hand-off, by the recurrence: each host
  // adds herself and the invitee branches she keeps back.  A branch that
  // hangs under a host through a non-invitation tree edge never enters:
  // it follows the item silently and never takes part in an auction, so
  // it must not price anything.
  const std::vector<std::vector<int>> excluded =
      excluded_sets_by_recurrence(tree, dg.invitees, march);
  std::vector<double> fence(last + 1, 0.0);
  for (int j = 1; j <= last; ++j) {
    for (int node : excluded[j]) {
      fence[j] = std::max(fence[j], report.bids[node]);
    }
  }

  // The item comes to rest at the first host whose bid matches the top
  // excluded bid of the next hand-off; the march's end keeps it by default.
  int rest = last;
  for (int j = 1; j < last; ++j) {
    if (report.bids[march[j]] == fence[j + 1]) {
      rest = j;
      break;
    }
  }

  out.path.assign(march.begin(), march.begin() + rest + 1);
  out.winner = march[rest];
  out.revenue = fence[1];
  out.payments[out.winner] = fence[rest];
  for (int j = 1; j < rest; ++j) {
    out.payments[march[j]] = fence[j] - fence[j + 1];
  }
  return out;
}

OutcomeSummary crm_run(const Instance& instance, const Report& report,
                       const CrmOptions& options) {
  const int n = instance.size();
  const DiffusionGraph dg = run_stage1_diffusion(instance, report);
  OutcomeSummary summary;
  summary.win_prob.assign(n, 0.0);
  summary.payment.assign(n, 0.0);
  summary.utility.assign(n, 0.0);

  const std::vector<int> tops = top_bidders(report, dg);

  auto evaluate_averaged = [&](const SpanningTree& tree, double weight) {
    if (tops.empty()) {
      WeightedOutcome wo{weight, evaluate_tree_resale(instance, report, dg,
                                                      tree, TieBreak{})};
      accumulate(summary, instance, wo);
      return;
    }
    const double w = weight / static_cast<double>(tops.size());
    for (int z : tops) {
      WeightedOutcome wo{w, evaluate_tree_resale(instance, report, dg, tree,
                                                 TieBreak{0, z})};
      accumulate(summary, instance, wo);
    }
  };

  if (options.samples == 0) {
    summary.exact = true;
    if (options.distribution == TreeDistribution::kUniformTrees) {
      const ValidSubgraph g = build_valid_subgraph(instance, report);
      const auto trees = enumerate_spanning_trees(g, options.tree_cap);
      summary.tree_count = static_cast<long long>(trees.size());
      const double w = 1.0 / static_cast<double>(trees.size());
      for (const SpanningTree& tree : trees) evaluate_averaged(tree, w);
      return summary;
    }
    // Every combination of inviter choices is equally likely, so the
    // expectation is a plain average over the product space.
    std::vector<int> informed;
    long long combos = 1;
    for (int i = 1; i < n; ++i) {
      if (dg.depth[i] < 1) continue;
      informed.push_back(i);
      combos *= static_cast<long long>(dg.inviters[i].size());
      if (combos > options.tree_cap) {
        throw EnumerationCapExceeded(
            "the network admits more than " +
            std::to_string(options.tree_cap) +
            " inviter assignments; evaluate by sampling instead "
            "(tree-samples > 0)");
      }
    }
    summary.tree_count = combos;
    const double w = 1.0 / static_cast<double>(combos);
    std::vector<int> choice(n, 0);
    for (;;) {
      evaluate_averaged(assignment_tree(dg, choice), w);
      int k = static_cast<int>(informed.size()) - 1;
      while (k >= 0) {
        const int i = informed[k];
        if (++choice[i] < static_cast<int>(dg.inviters[i].size())) break;
        choice[i] = 0;
        --k;
      }
      if (k < 0) break;
    }
    return summary;
  }

  summary.exact = false;
  summary.tree_count = options.samples;
  const double w = 1.0 / static_cast<double>(options.samples);
  const ValidSubgraph g = build_valid_subgraph(instance, report);
  for (long long s = 0; s < options.samples; ++s) {
    SpanningTree tree;
    if (options.distribution == TreeDistribution::kUniformTrees) {
      tree = sample_spanning_tree(g, mix(options.seed, kSampleTag,
                                         static_cast<std::uint64_t>(s)));
    } else {
      std::vector<int> choice(n, 0);
      for (int i = 1; i < n; ++i) {
        if (dg.depth[i] < 1) continue;
        choice[i] = static_cast<int>(
            pick_index(mix(options.seed, kAssignTag,
                           static_cast<std::uint64_t>(s),
                           static_cast<std::uint64_t>(i)),
                       dg.inviters[i].size()));
      }
      tree = assignment_tree(dg, choice);
    }
    TieBreak tie;
    tie.seed = mix(options.seed, kSampleTag, static_cast<std::uint64_t>(s));
    tie.favored =
        tops.empty()
            ? -1
            : tops[pick_index(mix(options.seed, kDesignTag,
                                  static_cast<std::uint64_t>(s)),
                              tops.size())];
    WeightedOutcome wo{w, evaluate_tree_resale(instance, report, dg, tree,
                                               tie)};
    accumulate(summary, instance, wo);
  }
  return summary;
}

TreeAgreement crm_equivalence_check(const Instance& instance,
                                    const Report& report,
                                    long long tree_cap) {
  const DiffusionGraph dg = run_stage1_diffusion(instance, report);
  const ValidSubgraph g = build_valid_subgraph(instance, report);
  const std::vector<int> tops = top_bidders(report, dg);
  TreeAgreement agreement;
  const auto trees = enumerate_spanning_trees(g, tree_cap);
  for (const SpanningTree& tree : trees) {
    std::vector<TieBreak> ties;
    if (tops.empty()) {
      ties.push_back(TieBreak{});
    } else {
      for (int z : tops) ties.push_back(TieBreak{0, z});
    }
    for (const TieBreak& tie : ties) {
      ++agreement.trees;
      const TreeOutcome engine =
          evaluate_tree_resale(instance, report, dg, tree, tie);
      const TreeOutcome algebra =
          closed_form_tree_outcome(instance, report, dg, tree, tie);
      const bool same = engine.winner == algebra.winner &&
                        engine.revenue == algebra.revenue &&
                        engine.path == algebra.path &&
                        engine.payments == algebra.payments;
      if (!same) {
        ++agreement.outcome_mismatches;
        if (agreement.examples.size() < 5) {
          std::string ex = "winner " + instance.id(engine.winner) + " vs " +
                           instance.id(algebra.winner) + ", revenue " +
                           std::to_string(engine.revenue) + " vs " +
                           std::to_string(algebra.revenue);
          agreement.examples.push_back(ex);
        }
      }
      if (!is_diffusion_path(g, engine.path)) ++agreement.path_divergences;
    }
  }
  return agreement;
}

}  // namespace sra
