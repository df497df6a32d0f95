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

#ifndef SRA_BASELINES_HPP_
#define SRA_BASELINES_HPP_

#include <cstdint>
#include <vector>

#include "sra/crm.hpp"
#include "sra/graph.hpp"
#include "sra/types.hpp"

namespace sra {

// The cut vertices separating the seller from the top bidder z, ordered by
// distance from the seller, with z appended last.  dominated[k] holds the
// buyers cut off from the seller when nodes[k] is removed, nodes[k]
// included.  The sets shrink as k grows.
struct CriticalSequence {
  int z = -1;
  std::vector<int> nodes;
  std::vector<std::vector<int>> dominated;
};

CriticalSequence critical_sequence(const ValidSubgraph& g, int z);

// The information diffusion mechanism: only the top bidder's cut vertices
// matter.  The first of them able to match the best bid outside her own
// dependents wins; cut vertices between her and the seller are paid for
// relaying (their net payment is negative); everyone else nets zero.
struct IdmOutcome {
  int z = -1;
  CriticalSequence sequence;
  int winner = 0;               // 0 = no valid buyers, the seller keeps
  std::vector<double> payment;  // net per agent, positive = pays
  double revenue = 0;
};

IdmOutcome idm_run(const Instance& instance, const Report& report,
                   std::uint64_t seed);

// Second-price sealed-bid auction among the seller's reported neighbors
// only; no diffusion.  Ties go to the first neighbor in canonical order.
struct VcgOutcome {
  int winner = 0;  // 0 = the seller has no neighbors, no sale
  double price = 0;
  double revenue = 0;
};

VcgOutcome vcg_neighbors(const Instance& instance, const Report& report);

// Deterministic outcomes reshaped for the shared summary table.
OutcomeSummary to_summary(const Instance& instance, const IdmOutcome& idm);
OutcomeSummary to_summary(const Instance& instance, const VcgOutcome& vcg);

}  // namespace sra

#endif  // SRA_BASELINES_HPP_
