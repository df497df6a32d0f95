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

#ifndef SRA_EXPERIMENT_HPP_
#define SRA_EXPERIMENT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sra/crm.hpp"
#include "sra/types.hpp"

namespace sra {

// How buyer valuations are drawn per sampled instance.  kDepthUniform
// draws buyer i uniformly from [low_base + low_step * d_i, high_base +
// high_step * d_i], with d_i her shortest-path distance from the seller;
// deeper buyers value the item more, which is what makes diffusion pay.
struct ValuationModel {
  enum Kind { kFixed, kDepthUniform };
  Kind kind = kFixed;
  double low_base = 0.1;
  double low_step = 0.1;
  double high_base = 0.6;
  double high_step = 0.1;
};

struct ExperimentConfig {
  std::string graph_path;
  ValuationModel valuations;
  long long instances = 10000;     // valuation draws (1 when fixed)
  long long tree_samples = 1000;   // inner runs per draw; 0 = exact
  TreeDistribution distribution = TreeDistribution::kUniformTrees;
  std::uint64_t seed = 0;
  std::vector<std::string> mechanisms = {"sra", "crm", "idm", "vcg"};
};

// JSON config: {"graph", "valuations": {"model", ...bounds}, "instances",
// "tree_samples", "tree_distribution", "seed", "mechanisms"}.  Every field
// is optional except graph; unknown keys are rejected.
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentResult {
  // Mechanism name -> CSV text with the stable column set
  // id, depth, win_prob, avg_utility, avg_payment.
  std::map<std::string, std::string> csv;
  std::string summary_json;
};

// Runs every selected mechanism over the sampled valuation profiles and
// averages per buyer.  Identical config and seed give byte-identical
// results.  Throws InputError when some buyer cannot be reached from the
// seller (the experiment would silently ignore her otherwise).
ExperimentResult run_experiment(const Instance& instance,
                                const ExperimentConfig& config);

// Writes <out_dir>/<mechanism>.csv and <out_dir>/summary.json.
void write_experiment(const ExperimentResult& result,
                      const std::string& out_dir);

}  // namespace sra

#endif  // SRA_EXPERIMENT_HPP_
