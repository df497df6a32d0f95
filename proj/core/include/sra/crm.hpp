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

#ifndef SRA_CRM_HPP_
#define SRA_CRM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sra/engine.hpp"
#include "sra/graph.hpp"
#include "sra/types.hpp"

namespace sra {

// How the centralized reduction weighs the spanning trees of the reported
// network.  kUniformTrees treats every spanning tree alike.
// kInvitationWeighted weighs a tree by how often the decentralized run
// realizes it, which is uniform over the per-agent inviter choices.
enum class TreeDistribution {
  kUniformTrees,
  kInvitationWeighted,
};

TreeDistribution parse_tree_distribution(const std::string& name);
std::string distribution_name(TreeDistribution d);

struct CrmOptions {
  TreeDistribution distribution = TreeDistribution::kUniformTrees;
  long long samples = 0;  // 0 = exact expectation over all trees
  std::uint64_t seed = 0;
  long long tree_cap = kDefaultTreeCap;
};

// The resale outcome on one fixed tree.
struct TreeOutcome {
  std::vector<int> path;         // hosts in order, starting at the seller
  int winner = 0;                // 0 = the seller keeps the item
  std::vector<double> payments;  // net per agent, positive = pays
  double revenue = 0;
};

// Runs the allocation stage of the resale engine with the tree as the
// aggregation forest.  The invitation structure still comes from the
// reported network, so the same machinery covers trees the spreading
// process itself could never have produced.
TreeOutcome evaluate_tree_resale(const Instance& instance,
                                 const Report& report,
                                 const DiffusionGraph& dg,
                                 const SpanningTree& tree,
                                 const TieBreak& tie);

// The same outcome from the price algebra instead of the engine: march the
// item along argmax branches, detect the final holder as the first host
// whose bid tops everyone excluded by the next hand-off, and settle
// payments by telescoping the excluded-set maxima.  Shares the invitee
// sets, the reattachment rule and the tie rule with the engine, and
// nothing else; a disagreement means one of the two routes is wrong.
TreeOutcome closed_form_tree_outcome(const Instance& instance,
                                     const Report& report,
                                     const DiffusionGraph& dg,
                                     const SpanningTree& tree,
                                     const TieBreak& tie);

// Expectations over the tree distribution.
struct OutcomeSummary {
  std::vector<double> win_prob;  // win_prob[0] = the seller keeps
  std::vector<double> payment;   // expected net payment
  std::vector<double> utility;   // against true valuations; utility[0] = revenue
  double revenue = 0;
  long long tree_count = 0;  // trees averaged (exact) or samples drawn
  bool exact = true;
};

// The centralized mechanism: the expected resale outcome over the chosen
// tree distribution.  Exact mode enumerates (trees or inviter choices) and
// averages over the top-bidder designations when the top bid is shared;
// sampling mode draws `samples` trees and designates per draw.  Throws
// EnumerationCapExceeded when exact mode faces more trees than `tree_cap`.
OutcomeSummary crm_run(const Instance& instance, const Report& report,
                       const CrmOptions& options);

// Agreement data between the engine route and the price algebra over every
// spanning tree and every top-bidder designation.
struct TreeAgreement {
  long long trees = 0;            // (tree, designation) pairs compared
  long long outcome_mismatches = 0;
  long long path_divergences = 0;  // resale paths with shortcut edges
  std::vector<std::string> examples;  // first few mismatches, for reports
};

TreeAgreement crm_equivalence_check(const Instance& instance,
                                    const Report& report,
                                    long long tree_cap = kDefaultTreeCap);

}  // namespace sra

#endif  // SRA_CRM_HPP_
