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

#ifndef SRA_TYPES_HPP_
#define SRA_TYPES_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sra {

// Malformed or inconsistent input (graph files, configs, profile builders).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reseller claimed a purchase price that contradicts the transaction
// ledger.  Raised by the allocation stage; the run is aborted.
struct ManipulationDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact enumeration was requested for a graph whose spanning-tree count
// exceeds the configured cap.
struct EnumerationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr long long kDefaultTreeCap = 1'000'000;

// One sale scenario: a seller who owns a single item and the buyers spread
// over a social network.  Node 0 is always the seller; buyers follow in
// lexicographic id order, which fixes a canonical ordering for every
// iteration and tie-break in the library.
struct Instance {
  std::vector<std::string> ids;
  std::vector<double> valuations;           // true values; valuations[0] == 0
  std::vector<std::vector<int>> neighbors;  // undirected adjacency, sorted

  int size() const { return static_cast<int>(ids.size()); }
  int buyer_count() const { return size() - 1; }
  int index_of(std::string_view id) const;
  const std::string& id(int i) const { return ids[i]; }
};

// Helper for building instances by id.
struct BuyerSpec {
  std::string id;
  double valuation = 0;
  std::vector<std::string> neighbors;
};

// Builds a canonical Instance.  Neighbor listings may be one-sided; the true
// network is undirected, so they are symmetrized.  Throws InputError on
// duplicate ids, unknown neighbor references, self-loops, or negative or
// non-finite valuations.
Instance make_instance(const std::string& seller_id,
                       std::vector<BuyerSpec> buyers,
                       const std::vector<std::string>& seller_neighbors = {});

// What the mechanism is told: each buyer's bid and the subset of her
// neighbors she chooses to invite.  The seller reports her neighbor set
// faithfully and carries no bid.
struct Report {
  std::vector<double> bids;                // bids[0] == 0
  std::vector<std::vector<int>> invited;   // invited[i] subset of neighbors[i]
};

Report truthful_report(const Instance& instance);

}  // namespace sra

#endif  // SRA_TYPES_HPP_
