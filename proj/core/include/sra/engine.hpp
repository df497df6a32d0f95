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

#ifndef SRA_ENGINE_HPP_
#define SRA_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sra/types.hpp"

namespace sra {

// Stage 1 output: who hears of the sale, from whom, and in which round.
struct DiffusionGraph {
  std::vector<int> depth;                  // rounds from the seller; -1 = never informed
  std::vector<std::vector<int>> inviters;  // round-(d-1) agents who listed her; sorted
  std::vector<std::vector<int>> invitees;  // listed agents she informed first; sorted
  std::vector<int> order;                  // informed agents, by round then index
};

// Synchronous spreading over the reported lists.  Informing is directional:
// only agents that i herself lists can hear of the sale through her, and an
// agent informed in round d owes her invitation to every round-(d - 1)
// agent who listed her.  Edges between agents of the same round carry no
// invitation.  Deterministic.
DiffusionGraph run_stage1_diffusion(const Instance& instance,
                                    const Report& report);

// One agent's deviation from the intended behavior.  Unset fields mean the
// intended action: bid the true valuation, list all neighbors, forward the
// aggregate to one uniformly chosen inviter, aggregate with max.
struct AgentStrategy {
  std::optional<double> bid;
  std::optional<std::vector<int>> invited;       // must be a neighbor subset
  std::optional<std::vector<int>> pass_targets;  // must be an inviter subset
  std::optional<double> compute_constant;        // aggregate ignores inputs

  bool intended() const {
    return !bid && !invited && !pass_targets && !compute_constant;
  }
};

// Per-agent strategies; index 0 (the seller) is ignored.
using StrategyProfile = std::vector<AgentStrategy>;

StrategyProfile intended_profile(const Instance& instance);

// The revelation part of a profile (bids and neighbor lists) turned into a
// report.  Throws InputError if an agent lists a non-neighbor or bids a
// negative or non-finite amount.
Report apply_revelation(const Instance& instance,
                        const StrategyProfile& strategies);

// Stage 2 output: where each agent sent her aggregate and what it was.
struct AggregationForest {
  std::vector<std::vector<int>> parents;    // inviters the aggregate went to
  std::vector<double> bid;                  // the aggregate itself
  std::vector<std::vector<double>> received;  // values that arrived, in order
};

// Bottom-up aggregation, deepest rounds first.  The intended agent sends
// max(own bid, everything received) to one inviter chosen by a per-agent
// hash of `seed`, so one agent's deviation never shifts another's draw.
// Deviators may instead send to any subset of their inviters (an empty set
// keeps the aggregate local) or aggregate with a constant function.
AggregationForest run_stage2_aggregation(const Instance& instance,
                                         const Report& report,
                                         const DiffusionGraph& dg,
                                         const StrategyProfile& strategies,
                                         std::uint64_t seed);

// How exact ties between top bids are resolved: prefer the branch holding
// `favored` when exactly one tied branch does, otherwise a hash draw.
struct TieBreak {
  std::uint64_t seed = 0;
  int favored = -1;
};

// Chooses among participants whose bids are exactly tied at the top.
using TiePicker = std::function<int(const std::vector<int>& tied)>;

// The hash half of the tie rule: index of the winning branch among k tied
// candidates at a given host and auction step.  Exposed so that every
// routine resolving the same tie draws the same answer.
std::size_t tie_draw(const TieBreak& tie, int host, int step, std::size_t k);

// One host's auction.  Participants appear in index order with their current
// subtree aggregates; `second` is 0 with fewer than two participants.
struct LocalAuction {
  int host = 0;
  double host_bid = 0;  // the host's reported stake; 0 for the seller
  double reserve = 0;
  std::vector<std::pair<int, double>> bids;
  double first = 0;
  double second = 0;
  int winner = -1;  // -1 = host keeps the item
  double price = 0;
};

// Sells iff someone participates and the price max(reserve, second) beats
// the host's reported stake.  The seller has no stake and sells whenever
// anyone participates.
LocalAuction local_auction(int host, double host_bid, double reserve,
                           const std::vector<std::pair<int, double>>& bids,
                           bool seller_host, const TiePicker& pick);

struct LedgerRecord {
  int buyer = 0;
  int seller = 0;
  double price = 0;
};
using Ledger = std::vector<LedgerRecord>;

struct ResaleTrace {
  std::vector<LocalAuction> auctions;
  std::vector<int> path;         // hosts in order, starting at the seller
  int winner = 0;                // final holder; 0 if the seller keeps
  std::vector<double> payment;   // net per agent, positive = pays
  double revenue = 0;            // the seller's intake
  Ledger ledger;
};

struct Stage3Options {
  TieBreak tie;
  // Test hook: when this agent becomes host she claims `claimed_reserve`
  // as her purchase price instead of the truth.
  int claim_host = -1;
  double claimed_reserve = 0;
};

// Moves every invitee of `host` directly under her, then recomputes all
// aggregates child-before-parent with each agent's own aggregation rule.
void detach_and_reaggregate(const DiffusionGraph& dg, const Report& report,
                            const StrategyProfile* strategies, int host,
                            AggregationForest& forest);

// Stage 3: the item walks down the network.  Each host reattaches her
// invitees, runs a local auction among them at her purchase price as
// reserve, and either keeps the item or sells and hands the role on.  A
// host's claimed reserve is checked against the transaction ledger; a
// mismatch throws ManipulationDetected.
ResaleTrace run_stage3_allocation(const Instance& instance,
                                  const Report& report,
                                  const DiffusionGraph& dg,
                                  AggregationForest forest,
                                  const StrategyProfile* strategies,
                                  const Stage3Options& options);

// All three stages plus the accounting against true valuations.
struct SraOutcome {
  Report reported;
  DiffusionGraph diffusion;
  AggregationForest forest;  // as stage 2 left it
  ResaleTrace trace;
  std::vector<double> utility;  // against true valuations; utility[0] = revenue
  double revenue = 0;
};

SraOutcome run_sra(const Instance& instance, const StrategyProfile& strategies,
                   std::uint64_t seed, int favored = -1);

// Checks the bookkeeping of a finished run: the reserve never falls along
// the resale path, prices follow from the recorded auctions, every buyer
// could afford what she paid, the ledger matches the path, and payments
// balance the revenue.  Returns human-readable violations, empty if clean.
// Affordability is a guarantee of intended play; profiles that deviate in
// their aggregation rule can break it, so call this on intended runs.
std::vector<std::string> check_trace_invariants(const Instance& instance,
                                                const SraOutcome& outcome);

}  // namespace sra

#endif  // SRA_ENGINE_HPP_
