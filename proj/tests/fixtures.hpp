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

#ifndef SRA_TESTS_FIXTURES_HPP_
#define SRA_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "sra/types.hpp"

namespace fixtures {

// Line S - a - b - c, a branch with obvious hand-traceable outcomes.
// Diffusion depth equals position; every buyer has one inviter.
inline sra::Instance line(double va = 3, double vb = 7, double vc = 5) {
  return sra::make_instance(
      "S",
      {{"a", va, {"S", "b"}}, {"b", vb, {"c"}}, {"c", vc, {}}});
}

// Star: the seller sees everyone directly; resale never leaves depth 1.
inline sra::Instance star(double va = 3, double vb = 7, double vc = 2) {
  return sra::make_instance(
      "S", {{"a", va, {"S"}}, {"b", vb, {"S"}}, {"c", vc, {"S"}}});
}

inline sra::Instance single_buyer(double va = 5) {
  return sra::make_instance("S", {{"a", va, {"S"}}});
}

// S - a - b with c also adjacent to the seller.  Unique spanning tree.
// Intended play: a wins the first auction at price 2, then keeps, since
// her bid 3 covers the price of reselling to b.
inline sra::Instance instance_a() {
  return sra::make_instance(
      "S", {{"a", 3, {"S", "b"}}, {"b", 7, {"a"}}, {"c", 2, {"S"}}});
}

// The diamond: b is reachable through a and through c, four spanning
// trees, two distinct resale endings (b pays 2 via a, c pays 1 and keeps).
inline sra::Instance instance_b() {
  return sra::make_instance(
      "S", {{"a", 1, {"S", "b"}}, {"b", 10, {"a", "c"}}, {"c", 2, {"S", "b"}}});
}

// Twelve buyers over four depths with three two-inviter buyers (d, i, j).
// The top bidder j sits at depth 4 behind the cut vertex structure that
// separates the diffusion mechanisms from each other.
inline sra::Instance grid13() {
  return sra::make_instance(
      "S", {{"a", 0.31, {"S", "d"}},
            {"b", 0.42, {"S", "d", "e"}},
            {"c", 0.27, {"S", "f"}},
            {"d", 0.55, {"a", "b", "g"}},
            {"e", 0.48, {"b", "h", "i"}},
            {"f", 0.61, {"c", "i"}},
            {"g", 0.73, {"d", "j"}},
            {"h", 0.66, {"e", "j", "l"}},
            {"i", 0.79, {"e", "f", "k"}},
            {"j", 1.04, {"g", "h"}},
            {"k", 0.97, {"i"}},
            {"l", 0.88, {"h"}}});
}

// Triangle S - a - b - S: three spanning trees.
inline sra::Instance triangle(double va = 4, double vb = 6) {
  return sra::make_instance("S", {{"a", va, {"S", "b"}}, {"b", vb, {"S"}}});
}

// Four-cycle S - a - b - c - S: four spanning trees.
inline sra::Instance four_cycle() {
  return sra::make_instance(
      "S", {{"a", 4, {"S", "b"}}, {"b", 9, {"c"}}, {"c", 5, {"S"}}});
}

// Detaching f from under e leaves e with her residual maximum of 10:
// x and e are the seller's neighbors, f is invited by both.
inline sra::Instance residual_ten() {
  return sra::make_instance(
      "S", {{"e", 10, {"S", "f"}}, {"f", 20, {"x"}}, {"x", 50, {"S", "f"}}});
}

inline int idx(const sra::Instance& instance, const std::string& id) {
  return instance.index_of(id);
}

}  // namespace fixtures

#endif  // SRA_TESTS_FIXTURES_HPP_
