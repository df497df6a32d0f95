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

#ifndef SRA_GRAPH_HPP_
#define SRA_GRAPH_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "sra/types.hpp"

namespace sra {

// The reported network.  An edge {i, j} exists as soon as either side lists
// the other, and a buyer takes part exactly when a chain of such edges
// connects her to the seller.  Buyers outside the subgraph are ignored by
// every mechanism, so their reports cannot influence anyone's outcome.
struct ValidSubgraph {
  std::vector<char> valid;             // size n; valid[0] == 1
  std::vector<std::vector<int>> adj;   // sorted; empty for excluded nodes
  std::vector<int> nodes;              // ascending indices of member nodes
  int edge_count = 0;

  bool has_edge(int u, int v) const;
};

ValidSubgraph build_valid_subgraph(const Instance& instance,
                                   const Report& report);

// A spanning tree of the valid subgraph, rooted at the seller.
// parent[0] == -1; parent[i] == -1 also marks nodes outside the tree.
struct SpanningTree {
  std::vector<int> parent;
};

// Exact spanning-tree count via the Laplacian cofactor determinant.
long long count_spanning_trees(const ValidSubgraph& g);

// Streams every spanning tree exactly once, in a deterministic order.
void for_each_spanning_tree(const ValidSubgraph& g,
                            const std::function<void(const SpanningTree&)>& fn);

// Collects all spanning trees.  Throws EnumerationCapExceeded (suggesting
// the sampling mode) when the count is above `cap`.
std::vector<SpanningTree> enumerate_spanning_trees(
    const ValidSubgraph& g, long long cap = kDefaultTreeCap);

// One uniformly random spanning tree, by loop-erased random walk.
SpanningTree sample_spanning_tree(const ValidSubgraph& g, std::uint64_t seed);

// A simple seller-rooted path is a diffusion path when no edge of the valid
// subgraph joins two non-consecutive path nodes.  Such a shortcut edge
// would let the item skip the nodes between its endpoints during resale.
bool is_diffusion_path(const ValidSubgraph& g, const std::vector<int>& path);

// Splices shortcut edges out of `path` until it is a diffusion path: the
// pair (i, j), i < j - 1, with the smallest i (largest j on ties) is
// replaced by the direct step, dropping the nodes in between.  Returns the
// fixpoint; endpoints are preserved and the result is a diffusion path.
std::vector<int> transform_to_diffusion_path(const ValidSubgraph& g,
                                             std::vector<int> path);

// Buyers left outside the branch that path[j] carries away, once every
// earlier path node has gathered her own invitees directly under herself.
// `invitees` gives, per node, the buyers whose invitations she owns (see
// the diffusion stage); `path` starts at the seller; 1 <= j < path.size().
// On forests whose every edge is an invitation edge, the highest bid over
// this set is the price path[j] faces.
std::vector<int> excluded_set(const SpanningTree& tree,
                              const std::vector<std::vector<int>>& invitees,
                              const std::vector<int>& path, int j);

// All excluded sets of a path at once, computed by the recurrence
//   X_1 = branches left behind at the seller,
//   X_{j+1} = X_j + {path[j]} + branches of path[j]'s other invitees,
// where each branch carries its reattached subtree.  This is the route
// that prices hand-offs on arbitrary trees: a branch hanging under a host
// through a non-invitation edge follows the item without ever bidding, so
// only the complement route excluded_set counts it.  The two agree when
// every tree edge is an invitation edge.
std::vector<std::vector<int>> excluded_sets_by_recurrence(
    const SpanningTree& tree, const std::vector<std::vector<int>>& invitees,
    const std::vector<int>& path);

}  // namespace sra

#endif  // SRA_GRAPH_HPP_
