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

#include "sra/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "sra/baselines.hpp"
#include "sra/engine.hpp"
#include "sra/io.hpp"
#include "sra/rng.hpp"

namespace sra {
namespace {

constexpr std::uint64_t kDrawTag = 0x65787076ULL;  // valuation draws
constexpr std::uint64_t kRunTag = 0x65787072ULL;   // inner resale runs
constexpr std::uint64_t kCrmTag = 0x65787063ULL;   // per-draw crm seeds
constexpr std::uint64_t kIdmTag = 0x65787069ULL;   // per-draw idm seeds

const std::set<std::string> kKnownMechanisms = {"sra", "crm", "idm", "vcg"};

std::vector<int> depths_from_seller(const Instance& instance) {
  std::vector<int> depth(instance.size(), -1);
  depth[0] = 0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : instance.neighbors[u]) {
      if (depth[v] >= 0) continue;
      depth[v] = depth[u] + 1;
      q.push(v);
    }
  }
  std::string unreachable;
  for (int i = 1; i < instance.size(); ++i) {
    if (depth[i] >= 0) continue;
    if (!unreachable.empty()) unreachable += ", ";
    unreachable += instance.id(i);
  }
  if (!unreachable.empty()) {
    throw InputError("buyers not connected to the seller: " + unreachable);
  }
  return depth;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config file is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object()) throw InputError("config file must be a JSON object");
  ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "graph") {
      config.graph_path = value.get<std::string>();
    } else if (key == "instances") {
      config.instances = value.get<long long>();
    } else if (key == "tree_samples") {
      config.tree_samples = value.get<long long>();
    } else if (key == "tree_distribution") {
      config.distribution = parse_tree_distribution(value.get<std::string>());
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else if (key == "mechanisms") {
      config.mechanisms = value.get<std::vector<std::string>>();
    } else if (key == "valuations") {
      if (!value.is_object()) {
        throw InputError("config \"valuations\" must be an object");
      }
      for (const auto& [vkey, vval] : value.items()) {
        if (vkey == "model") {
          const std::string model = vval.get<std::string>();
          if (model == "fixed") {
            config.valuations.kind = ValuationModel::kFixed;
          } else if (model == "depth_uniform") {
            config.valuations.kind = ValuationModel::kDepthUniform;
          } else {
            throw InputError("unknown valuation model: " + model);
          }
        } else if (vkey == "low_base") {
          config.valuations.low_base = vval.get<double>();
        } else if (vkey == "low_step") {
          config.valuations.low_step = vval.get<double>();
        } else if (vkey == "high_base") {
          config.valuations.high_base = vval.get<double>();
        } else if (vkey == "high_step") {
          config.valuations.high_step = vval.get<double>();
        } else {
          throw InputError("unknown key in config valuations: " + vkey);
        }
      }
    } else {
      throw InputError("unknown key in config file: " + key);
    }
  }
  if (config.instances < 1) {
    throw InputError("config instances must be at least 1");
  }
  if (config.tree_samples < 0) {
    throw InputError("config tree_samples must not be negative");
  }
  if (config.mechanisms.empty()) {
    throw InputError("config selects no mechanisms");
  }
  for (const std::string& m : config.mechanisms) {
    if (!kKnownMechanisms.count(m)) {
      throw InputError("unknown mechanism in config: " + m);
    }
  }
  return config;
}

ExperimentResult run_experiment(const Instance& base,
                                const ExperimentConfig& config) {
  const int n = base.size();
  const std::vector<int> depth = depths_from_seller(base);
  const bool fixed = config.valuations.kind == ValuationModel::kFixed;
  const long long draws = fixed ? 1 : config.instances;

  struct Acc {
    double win = 0;
    double utility = 0;
    double payment = 0;
  };
  std::map<std::string, std::vector<Acc>> acc;
  std::map<std::string, double> revenue;
  std::map<std::string, long long> trees;
  std::map<std::string, bool> exact;
  for (const std::string& m : config.mechanisms) {
    if (!kKnownMechanisms.count(m)) {
      throw InputError("unknown mechanism: " + m);
    }
    acc[m].assign(n, Acc{});
    revenue[m] = 0;
    trees[m] = -1;
    exact[m] = false;
  }

  const auto add_summary = [&](const std::string& m,
                               const OutcomeSummary& s) {
    for (int i = 0; i < n; ++i) {
      acc[m][i].win += s.win_prob[i];
      if (i > 0) {
        acc[m][i].utility += s.utility[i];
        acc[m][i].payment += s.payment[i];
      }
    }
    revenue[m] += s.revenue;
    trees[m] = s.tree_count;
    exact[m] = s.exact;
  };

  for (long long d = 0; d < draws; ++d) {
    Instance instance = base;
    if (!fixed) {
      for (int i = 1; i < n; ++i) {
        const double lo = config.valuations.low_base +
                          config.valuations.low_step * depth[i];
        const double hi = config.valuations.high_base +
                          config.valuations.high_step * depth[i];
        const double u = uniform01(mix(config.seed, kDrawTag,
                                       static_cast<std::uint64_t>(d),
                                       static_cast<std::uint64_t>(i)));
        instance.valuations[i] = lo + (hi - lo) * u;
      }
    }
    const StrategyProfile intended = intended_profile(instance);
    const Report reported = apply_revelation(instance, intended);

    for (const std::string& m : config.mechanisms) {
      if (m == "sra") {
        if (config.tree_samples == 0) {
          // The per-seed process averages to the exact expectation over
          // inviter assignments, so exact mode evaluates that directly.
          CrmOptions options;
          options.distribution = TreeDistribution::kInvitationWeighted;
          add_summary(m, crm_run(instance, reported, options));
        } else {
          const double w = 1.0 / static_cast<double>(config.tree_samples);
          for (long long s = 0; s < config.tree_samples; ++s) {
            const SraOutcome o = run_sra(
                instance, intended,
                mix(config.seed, kRunTag, static_cast<std::uint64_t>(d),
                    static_cast<std::uint64_t>(s)));
            acc[m][o.trace.winner].win += w;
            for (int i = 1; i < n; ++i) {
              acc[m][i].utility += w * o.utility[i];
              acc[m][i].payment += w * o.trace.payment[i];
            }
            revenue[m] += w * o.revenue;
          }
          trees[m] = config.tree_samples;
          exact[m] = false;
        }
      } else if (m == "crm") {
        CrmOptions options;
        options.distribution = config.distribution;
        options.samples = config.tree_samples;
        options.seed = mix(config.seed, kCrmTag,
                           static_cast<std::uint64_t>(d));
        add_summary(m, crm_run(instance, reported, options));
      } else if (m == "idm") {
        add_summary(
            m, to_summary(instance,
                          idm_run(instance, reported,
                                  mix(config.seed, kIdmTag,
                                      static_cast<std::uint64_t>(d)))));
      } else {
        add_summary(m, to_summary(instance, vcg_neighbors(instance,
                                                          reported)));
      }
    }
  }

  ExperimentResult result;
  const double dn = static_cast<double>(draws);
  for (const std::string& m : config.mechanisms) {
    std::ostringstream csv;
    csv << "id,depth,win_prob,avg_utility,avg_payment\n";
    for (int i = 1; i < n; ++i) {
      csv << base.id(i) << "," << depth[i] << ","
          << format_number(acc[m][i].win / dn) << ","
          << format_number(acc[m][i].utility / dn) << ","
          << format_number(acc[m][i].payment / dn) << "\n";
    }
    result.csv[m] = csv.str();
  }

  nlohmann::ordered_json summary;
  summary["graph"] = config.graph_path;
  summary["seed"] = config.seed;
  summary["valuation_model"] = fixed ? "fixed" : "depth_uniform";
  summary["instances"] = draws;
  summary["tree_samples"] = config.tree_samples;
  summary["tree_distribution"] = distribution_name(config.distribution);
  summary["mechanisms"] = config.mechanisms;
  nlohmann::ordered_json revenues;
  nlohmann::ordered_json tree_counts;
  for (const std::string& m : config.mechanisms) {
    revenues[m] = revenue[m] / dn;
    if (trees[m] > 0) {
      tree_counts[m] = nlohmann::ordered_json::object(
          {{"count", trees[m]}, {"exact", exact[m]}});
    }
  }
  summary["revenues"] = std::move(revenues);
  summary["trees"] = std::move(tree_counts);
  result.summary_json = summary.dump(2) + "\n";
  return result;
}

void write_experiment(const ExperimentResult& result,
                      const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw InputError("cannot create output directory " + out_dir + ": " +
                     ec.message());
  }
  for (const auto& [mechanism, csv] : result.csv) {
    write_text_file(out_dir + "/" + mechanism + ".csv", csv);
  }
  write_text_file(out_dir + "/summary.json", result.summary_json);
}

}  // namespace sra
