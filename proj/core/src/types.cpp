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

#include "sra/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace sra {

int Instance::index_of(std::string_view id) const {
  for (int i = 0; i < size(); ++i) {
    if (ids[i] == id) return i;
  }
  return -1;
}

Instance make_instance(const std::string& seller_id,
                       std::vector<BuyerSpec> buyers,
                       const std::vector<std::string>& seller_neighbors) {
  std::sort(buyers.begin(), buyers.end(),
            [](const BuyerSpec& a, const BuyerSpec& b) { return a.id < b.id; });

  Instance out;
  out.ids.push_back(seller_id);
  out.valuations.push_back(0.0);
  for (const BuyerSpec& b : buyers) {
    if (b.id == seller_id) throw InputError("buyer id equals seller id: " + b.id);
    if (!std::isfinite(b.valuation) || b.valuation < 0) {
      throw InputError("buyer " + b.id + " has an invalid valuation");
    }
    out.ids.push_back(b.id);
    out.valuations.push_back(b.valuation);
  }

  std::map<std::string, int> index;
  for (int i = 0; i < out.size(); ++i) {
    if (!index.emplace(out.ids[i], i).second) {
      throw InputError("duplicate node id: " + out.ids[i]);
    }
  }

  std::vector<std::set<int>> adj(out.size());
  auto connect = [&](int u, const std::string& other) {
    auto it = index.find(other);
    if (it == index.end()) {
      throw InputError("unknown neighbor id: " + other);
    }
    int v = it->second;
    if (u == v) throw InputError("self-loop on node: " + other);
    adj[u].insert(v);
    adj[v].insert(u);
  };
  for (const BuyerSpec& b : buyers) {
    int u = index.at(b.id);
    for (const std::string& other : b.neighbors) connect(u, other);
  }
  for (const std::string& other : seller_neighbors) connect(0, other);

  out.neighbors.resize(out.size());
  for (int i = 0; i < out.size(); ++i) {
    out.neighbors[i].assign(adj[i].begin(), adj[i].end());
  }
  return out;
}

Report truthful_report(const Instance& instance) {
  Report r;
  r.bids = instance.valuations;
  r.bids[0] = 0.0;
  r.invited = instance.neighbors;
  return r;
}

}  // namespace sra
