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

#include "sra/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "sra/rng.hpp"

namespace sra {

namespace {

// Hash domains, so stage-2 draws and tie draws from one seed never collide.
constexpr std::uint64_t kPassTag = 0x70617373ULL;
constexpr std::uint64_t kTieTag = 0x1e6272ab5ULL;

void check_report(const Instance& instance, const Report& report) {
  const int n = instance.size();
  if (static_cast<int>(report.bids.size()) != n ||
      static_cast<int>(report.invited.size()) != n) {
    throw InputError("report does not cover every agent");
  }
}

// True iff `target` sits in the branch rooted at `root` of the current
// forest.  Branches of a multi-parent forest may overlap; the caller deals
// with that.
bool branch_holds(const AggregationForest& forest, int root, int target) {
  if (root == target) return true;
  const int n = static_cast<int>(forest.parents.size());
  std::vector<std::vector<int>> children(n);
  for (int i = 1; i < n; ++i) {
    for (int p : forest.parents[i]) children[p].push_back(i);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int c : children[u]) {
      if (c == target) return true;
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

}  // namespace

DiffusionGraph run_stage1_diffusion(const Instance& instance,
                                    const Report& report) {
  const int n = instance.size();
  check_report(instance, report);
  DiffusionGraph dg;
  dg.depth.assign(n, -1);
  dg.inviters.assign(n, {});
  dg.invitees.assign(n, {});
  dg.depth[0] = 0;
  dg.order.push_back(0);
  std::vector<int> frontier{0};
  for (int round = 1; !frontier.empty(); ++round) {
    std::set<int> informed_now;
    for (int k : frontier) {
      for (int j : report.invited[k]) {
        if (j < 0 || j >= n) {
          throw InputError("reported neighbor index out of range");
        }
        if (dg.depth[j] == -1) informed_now.insert(j);
      }
    }
    for (int j : informed_now) dg.depth[j] = round;
    for (int k : frontier) {
      for (int j : report.invited[k]) {
        if (dg.depth[j] == round) {
          dg.invitees[k].push_back(j);
          dg.inviters[j].push_back(k);
        }
      }
    }
    frontier.assign(informed_now.begin(), informed_now.end());
    dg.order.insert(dg.order.end(), frontier.begin(), frontier.end());
  }
  for (int i = 0; i < n; ++i) {
    std::sort(dg.inviters[i].begin(), dg.inviters[i].end());
    std::sort(dg.invitees[i].begin(), dg.invitees[i].end());
  }
  return dg;
}

StrategyProfile intended_profile(const Instance& instance) {
  return StrategyProfile(instance.size());
}

Report apply_revelation(const Instance& instance,
                        const StrategyProfile& strategies) {
  const int n = instance.size();
  if (static_cast<int>(strategies.size()) != n) {
    throw InputError("strategy profile does not cover every agent");
  }
  Report report = truthful_report(instance);
  for (int i = 1; i < n; ++i) {
    const AgentStrategy& s = strategies[i];
    if (s.bid) {
      if (!std::isfinite(*s.bid) || *s.bid < 0) {
        throw InputError("bids must be finite and nonnegative");
      }
      report.bids[i] = *s.bid;
    }
    if (s.invited) {
      const auto& nb = instance.neighbors[i];
      for (int j : *s.invited) {
        if (!std::binary_search(nb.begin(), nb.end(), j)) {
          throw InputError("an agent can only list her own neighbors");
        }
      }
      auto lst = *s.invited;
      std::sort(lst.begin(), lst.end());
      lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
      report.invited[i] = std::move(lst);
    }
  }
  return report;
}

AggregationForest run_stage2_aggregation(const Instance& instance,
                                         const Report& report,
                                         const DiffusionGraph& dg,
                                         const StrategyProfile& strategies,
                                         std::uint64_t seed) {
  const int n = instance.size();
  check_report(instance, report);
  if (static_cast<int>(strategies.size()) != n) {
    throw InputError("strategy profile does not cover every agent");
  }
  AggregationForest forest;
  forest.parents.assign(n, {});
  forest.bid.assign(n, 0.0);
  forest.received.assign(n, {});
  int rounds = 0;
  for (int i = 0; i < n; ++i) rounds = std::max(rounds, dg.depth[i]);
  for (int d = rounds; d >= 1; --d) {
    for (int i = 1; i < n; ++i) {
      if (dg.depth[i] != d) continue;
      const AgentStrategy& s = strategies[i];
      double b;
      if (s.compute_constant) {
        b = *s.compute_constant;
      } else {
        b = report.bids[i];
        for (double r : forest.received[i]) b = std::max(b, r);
      }
      forest.bid[i] = b;
      const auto& inv = dg.inviters[i];
      if (s.pass_targets) {
        auto targets = *s.pass_targets;
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()),
                      targets.end());
        for (int t : targets) {
          if (!std::binary_search(inv.begin(), inv.end(), t)) {
            throw InputError("an agent can only reply to her own inviters");
          }
        }
        forest.parents[i] = std::move(targets);
      } else {
        const std::size_t k =
            pick_index(mix(seed, kPassTag, static_cast<std::uint64_t>(i)),
                       inv.size());
        forest.parents[i] = {inv[k]};
      }
      for (int p : forest.parents[i]) forest.received[p].push_back(b);
    }
  }
  return forest;
}

std::size_t tie_draw(const TieBreak& tie, int host, int step, std::size_t k) {
  return pick_index(mix(tie.seed, kTieTag, static_cast<std::uint64_t>(host),
                        static_cast<std::uint64_t>(step)),
                    k);
}

LocalAuction local_auction(int host, double host_bid, double reserve,
                           const std::vector<std::pair<int, double>>& bids,
                           bool seller_host, const TiePicker& pick) {
  LocalAuction a;
  a.host = host;
  a.host_bid = host_bid;
  a.reserve = reserve;
  a.bids = bids;
  for (const auto& [i, b] : bids) {
    if (b > a.first) {
      a.second = a.first;
      a.first = b;
    } else if (b > a.second) {
      a.second = b;
    }
  }
  if (bids.size() < 2) a.second = 0;
  a.price = std::max(reserve, a.second);
  if (bids.empty()) return a;
  if (!seller_host && host_bid >= a.price) return a;
  std::vector<int> tied;
  for (const auto& [i, b] : bids) {
    if (b == a.first) tied.push_back(i);
  }
  a.winner = tied.size() == 1 ? tied.front() : pick(tied);
  return a;
}

void detach_and_reaggregate(const DiffusionGraph& dg, const Report& report,
                            const StrategyProfile* strategies, int host,
                            AggregationForest& forest) {
  const int n = static_cast<int>(forest.parents.size());
  for (int j : dg.invitees[host]) forest.parents[j] = {host};
  std::vector<char> active(n, 0);
  for (int i = 1; i < n; ++i) {
    if (dg.depth[i] >= 1 || !forest.parents[i].empty()) active[i] = 1;
  }
  std::vector<std::vector<int>> children(n);
  for (int i = 1; i < n; ++i) {
    if (!active[i]) continue;
    for (int p : forest.parents[i]) children[p].push_back(i);
  }
  // Every aggregate is stale after a reattachment, so recompute all of
  // them, children before parents.  The plain rescan keeps this correct
  // for multi-parent forests left behind by deviating agents.
  std::vector<char> done(n, 0);
  int remaining = 0;
  for (int i = 1; i < n; ++i) remaining += active[i];
  while (remaining > 0) {
    bool progress = false;
    for (int i = 1; i < n; ++i) {
      if (!active[i] || done[i]) continue;
      bool ready = true;
      for (int c : children[i]) {
        if (!done[c]) {
          ready = false;
          break;
        }
      }
      if (!ready) continue;
      const AgentStrategy* s =
          strategies ? &(*strategies)[i] : nullptr;
      double b;
      if (s && s->compute_constant) {
        b = *s->compute_constant;
      } else {
        b = report.bids[i];
        for (int c : children[i]) b = std::max(b, forest.bid[c]);
      }
      forest.bid[i] = b;
      done[i] = 1;
      --remaining;
      progress = true;
    }
    if (!progress) {
      throw InputError("aggregation structure has a cycle");
    }
  }
}

ResaleTrace run_stage3_allocation(const Instance& instance,
                                  const Report& report,
                                  const DiffusionGraph& dg,
                                  AggregationForest forest,
                                  const StrategyProfile* strategies,
                                  const Stage3Options& options) {
  const int n = instance.size();
  check_report(instance, report);
  ResaleTrace trace;
  trace.payment.assign(n, 0.0);
  int host = 0;
  double reserve = 0;
  trace.path.push_back(0);
  for (int step = 0;; ++step) {
    detach_and_reaggregate(dg, report, strategies, host, forest);
    std::vector<std::pair<int, double>> bids;
    for (int j : dg.invitees[host]) bids.emplace_back(j, forest.bid[j]);
    const double host_bid = host == 0 ? 0.0 : report.bids[host];
    TiePicker pick = [&](const std::vector<int>& tied) {
      if (options.tie.favored >= 0) {
        int hit = -1;
        int hits = 0;
        for (int t : tied) {
          if (branch_holds(forest, t, options.tie.favored)) {
            hit = t;
            ++hits;
          }
        }
        if (hits == 1) return hit;
      }
      return tied[tie_draw(options.tie, host, step, tied.size())];
    };
    LocalAuction auction =
        local_auction(host, host_bid, reserve, bids, host == 0, pick);
    trace.auctions.push_back(auction);
    if (auction.winner < 0) break;
    trace.ledger.push_back({auction.winner, host, auction.price});
    trace.payment[auction.winner] += auction.price;
    if (host == 0) {
      trace.revenue = auction.price;
    } else {
      trace.payment[host] -= auction.price;
    }
    // The buyer takes over as host at her purchase price.  Her claimed
    // reserve must match the ledger record of that purchase.
    double claimed = auction.price;
    if (options.claim_host == auction.winner) {
      claimed = options.claimed_reserve;
    }
    const LedgerRecord& rec = trace.ledger.back();
    if (rec.buyer != auction.winner || claimed != rec.price) {
      throw ManipulationDetected(
          "host " + instance.id(auction.winner) + " claims a reserve of " +
          std::to_string(claimed) + " but the ledger records " +
          std::to_string(rec.price));
    }
    host = auction.winner;
    reserve = claimed;
    trace.path.push_back(host);
  }
  trace.winner = host;
  return trace;
}

SraOutcome run_sra(const Instance& instance, const StrategyProfile& strategies,
                   std::uint64_t seed, int favored) {
  SraOutcome out;
  out.reported = apply_revelation(instance, strategies);
  out.diffusion = run_stage1_diffusion(instance, out.reported);
  out.forest = run_stage2_aggregation(instance, out.reported, out.diffusion,
                                      strategies, seed);
  Stage3Options options;
  options.tie.seed = seed;
  options.tie.favored = favored;
  out.trace = run_stage3_allocation(instance, out.reported, out.diffusion,
                                    out.forest, &strategies, options);
  out.revenue = out.trace.revenue;
  const int n = instance.size();
  out.utility.assign(n, 0.0);
  for (int i = 1; i < n; ++i) out.utility[i] = -out.trace.payment[i];
  if (out.trace.winner > 0) {
    out.utility[out.trace.winner] += instance.valuations[out.trace.winner];
  }
  out.utility[0] = out.revenue;
  return out;
}

std::vector<std::string> check_trace_invariants(const Instance& instance,
                                                const SraOutcome& outcome) {
  std::vector<std::string> violations;
  const ResaleTrace& t = outcome.trace;
  auto fail = [&](const std::string& msg) { violations.push_back(msg); };

  if (static_cast<int>(t.payment.size()) != instance.size()) {
    fail("payment vector does not cover every agent");
    return violations;
  }
  if (t.auctions.empty() || t.path.size() != t.auctions.size() ||
      t.ledger.size() + 1 != t.auctions.size()) {
    fail("auction, path and ledger counts disagree");
    return violations;
  }
  double reserve = 0;
  for (std::size_t k = 0; k < t.auctions.size(); ++k) {
    const LocalAuction& a = t.auctions[k];
    if (a.host != t.path[k]) fail("auction host is off the resale path");
    if (a.reserve != reserve) fail("reserve does not chain from the sale");
    double first = 0;
    double second = 0;
    for (const auto& [i, b] : a.bids) {
      if (b > first) {
        second = first;
        first = b;
      } else if (b > second) {
        second = b;
      }
    }
    if (a.bids.size() < 2) second = 0;
    if (a.first != first || a.second != second) {
      fail("recorded top bids disagree with the participant list");
    }
    if (a.price != std::max(a.reserve, second)) {
      fail("price is not the larger of reserve and second bid");
    }
    const bool last = k + 1 == t.auctions.size();
    if (last) {
      if (a.winner != -1) fail("the trace continues past its final auction");
      continue;
    }
    if (a.winner < 0) {
      fail("a kept item cannot have been sold on");
      continue;
    }
    const LedgerRecord& rec = t.ledger[k];
    if (rec.buyer != a.winner || rec.seller != a.host || rec.price != a.price) {
      fail("ledger entry disagrees with its auction");
    }
    bool affordable = false;
    for (const auto& [i, b] : a.bids) {
      if (i == a.winner) affordable = b >= a.price;
    }
    if (!affordable) fail("a buyer paid more than her aggregate bid");
    if (a.price < a.reserve) fail("the reserve fell along the resale path");
    reserve = a.price;
  }
  if (t.winner != t.path.back()) fail("winner is not the last host");
  double paid = 0;
  for (std::size_t i = 1; i < t.payment.size(); ++i) paid += t.payment[i];
  if (std::abs(paid - t.revenue) > 1e-9) {
    fail("payments do not balance the revenue");
  }
  return violations;
}

}  // namespace sra
