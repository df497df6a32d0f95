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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sra/baselines.hpp"
#include "sra/crm.hpp"
#include "sra/engine.hpp"
#include "sra/experiment.hpp"
#include "sra/harness.hpp"
#include "sra/io.hpp"
#include "sra/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

void write_out(const std::string& out_dir, const std::string& name,
               const std::string& content) {
  if (out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw sra::InputError("cannot create output directory " + out_dir + ": " +
                          ec.message());
  }
  sra::write_text_file(out_dir + "/" + name, content);
}

void fold(sra::PropertyReport& into, const sra::PropertyReport& part) {
  if (into.property.empty()) into.property = part.property;
  into.instances += part.instances;
  into.trials += part.trials;
  into.violations.insert(into.violations.end(), part.violations.begin(),
                         part.violations.end());
  into.anomalies.insert(into.anomalies.end(), part.anomalies.begin(),
                        part.anomalies.end());
  into.max_gap = std::max(into.max_gap, part.max_gap);
  into.tolerance = part.tolerance;
  for (const std::string& note : part.notes) into.notes.push_back(note);
}

struct VerifyContext {
  std::string graph;
  std::uint64_t seed = 0;
  long long samples = 200;
  std::string out_dir;
  bool sabotage_first_price = false;
};

std::vector<sra::Instance> verify_instances(const VerifyContext& ctx,
                                            int count, int min_buyers,
                                            int max_buyers) {
  if (!ctx.graph.empty()) {
    return {sra::parse_instance_file(ctx.graph)};
  }
  return sra::random_instances(count, min_buyers, max_buyers,
                               sra::mix(ctx.seed, 0x76667279ULL));
}

sra::PropertyReport verify_ir(const VerifyContext& ctx) {
  const auto instances =
      verify_instances(ctx, static_cast<int>(ctx.samples), 3, 8);
  sra::PropertyReport report = sra::ir_check(instances, 10, ctx.seed);
  if (instances.size() == 1) {
    const sra::Instance& instance = instances.front();
    const sra::SraOutcome o = sra::run_sra(
        instance, sra::intended_profile(instance), ctx.seed);
    std::string line = "utilities on seed " + std::to_string(ctx.seed) + ":";
    for (int i = 1; i < instance.size(); ++i) {
      line += " " + instance.id(i) + "=" + sra::format_number(o.utility[i]);
    }
    report.notes.push_back(line);
  }
  return report;
}

sra::PropertyReport verify_ic(const VerifyContext& ctx) {
  const int count = std::max<long long>(4, ctx.samples / 10);
  const auto instances = verify_instances(ctx, count, 3, 6);
  sra::IcOptions options;
  options.mc_seeds = 300;
  options.seed = ctx.seed;
  if (ctx.sabotage_first_price) options.runner = sra::first_price_runner();
  sra::PropertyReport report = sra::ic_check(instances, options);
  if (ctx.sabotage_first_price) {
    report.notes.push_back(
        "winner pays her own bid (deliberately broken control)");
  }
  return report;
}

sra::PropertyReport verify_lemma1(const VerifyContext& ctx) {
  const auto instances =
      verify_instances(ctx, std::max<long long>(10, ctx.samples / 4), 3, 8);
  sra::PropertyReport report;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    fold(report, sra::lemma1_check(instances[k],
                                   "instance " + std::to_string(k),
                                   ctx.seed));
  }
  report.instances = static_cast<long long>(instances.size());
  return report;
}

sra::PropertyReport verify_revenue(const VerifyContext& ctx) {
  const auto instances =
      verify_instances(ctx, static_cast<int>(ctx.samples), 3, 8);
  return sra::revenue_check(instances, ctx.seed);
}

std::vector<sra::PropertyReport> verify_crm_equivalence(
    const VerifyContext& ctx) {
  const auto instances =
      verify_instances(ctx, std::max<long long>(10, ctx.samples / 4), 3, 7);

  sra::PropertyReport trees;
  trees.property = "engine and price algebra agree on every tree";
  trees.tolerance = 0;
  long long divergences = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const sra::Instance& instance = instances[k];
    ++trees.instances;
    const sra::Report reported = sra::truthful_report(instance);
    const sra::TreeAgreement agreement =
        sra::crm_equivalence_check(instance, reported);
    trees.trials += agreement.trees;
    divergences += agreement.path_divergences;
    if (agreement.outcome_mismatches > 0) {
      for (const std::string& ex : agreement.examples) {
        trees.violations.push_back({"instance " + std::to_string(k), ex, 0,
                                    0, 0});
      }
      trees.notes.push_back("instance " + std::to_string(k) + ": " +
                            std::to_string(agreement.outcome_mismatches) +
                            " mismatching evaluations");
    }
  }
  trees.notes.push_back(std::to_string(divergences) +
                        " resale paths left the diffusion-path form");

  sra::PropertyReport reduction;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    fold(reduction,
         sra::reduction_check(instances[k], "instance " + std::to_string(k),
                              2000, sra::mix(ctx.seed, 0x72656471ULL,
                                             static_cast<std::uint64_t>(k))));
  }
  reduction.instances = static_cast<long long>(instances.size());
  return {trees, reduction};
}

int run_verify(const VerifyContext& ctx, const std::string& suite) {
  std::vector<std::pair<std::string, sra::PropertyReport>> reports;
  if (suite == "ir" || suite == "all") reports.push_back({"ir", verify_ir(ctx)});
  if (suite == "ic" || suite == "all") reports.push_back({"ic", verify_ic(ctx)});
  if (suite == "lemma1" || suite == "all") {
    reports.push_back({"lemma1", verify_lemma1(ctx)});
  }
  if (suite == "revenue" || suite == "all") {
    reports.push_back({"revenue", verify_revenue(ctx)});
  }
  if (suite == "crm_equivalence" || suite == "all") {
    const auto pair = verify_crm_equivalence(ctx);
    reports.push_back({"crm_equivalence_trees", pair[0]});
    reports.push_back({"crm_equivalence_reduction", pair[1]});
  }

  bool all_pass = true;
  for (const auto& [name, report] : reports) {
    const std::string text = sra::serialize_report(report);
    std::cout << text << "\n";
    write_out(ctx.out_dir, name + ".txt", text);
    if (!report.pass()) all_pass = false;
  }
  return all_pass ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-item diffusion auctions over a social network"};
  app.require_subcommand(1);

  std::string graph;
  std::string config_path;
  std::string out_dir;
  std::string distribution = "uniform";
  std::string suite;
  std::uint64_t seed = 0;
  long long samples = -1;
  long long tree_samples = -1;
  bool sabotage = false;

  CLI::App* run_sra_cmd =
      app.add_subcommand("run-sra", "one seeded run of the resale process");
  run_sra_cmd->add_option("--graph", graph, "graph file")->required();
  run_sra_cmd->add_option("--seed", seed, "master seed");
  run_sra_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* run_crm_cmd = app.add_subcommand(
      "run-crm", "expected outcome over the spanning-tree distribution");
  run_crm_cmd->add_option("--graph", graph, "graph file")->required();
  run_crm_cmd->add_option("--seed", seed, "master seed");
  run_crm_cmd->add_option("--tree-samples", tree_samples,
                          "trees to sample; 0 = exact enumeration");
  run_crm_cmd
      ->add_option("--tree-distribution", distribution,
                   "uniform or invitation")
      ->check(CLI::IsMember({"uniform", "invitation"}));
  run_crm_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* run_idm_cmd = app.add_subcommand(
      "run-idm", "information diffusion mechanism on the same reports");
  run_idm_cmd->add_option("--graph", graph, "graph file")->required();
  run_idm_cmd->add_option("--seed", seed, "master seed");
  run_idm_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* run_vcg_cmd = app.add_subcommand(
      "run-vcg", "second-price auction among the seller's neighbors");
  run_vcg_cmd->add_option("--graph", graph, "graph file")->required();
  run_vcg_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* experiment_cmd = app.add_subcommand(
      "experiment", "winning probabilities and average utilities over "
                    "sampled valuation profiles");
  experiment_cmd->add_option("--config", config_path, "experiment config");
  experiment_cmd->add_option("--graph", graph, "graph file (overrides config)");
  experiment_cmd->add_option("--seed", seed, "master seed (overrides config)");
  experiment_cmd->add_option("--samples", samples,
                             "valuation draws (overrides config)");
  experiment_cmd->add_option("--tree-samples", tree_samples,
                             "inner runs per draw, 0 = exact (overrides "
                             "config)");
  experiment_cmd
      ->add_option("--tree-distribution", distribution,
                   "uniform or invitation (overrides config)")
      ->check(CLI::IsMember({"uniform", "invitation"}));
  experiment_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "property suites over generated or given "
                                   "instances");
  verify_cmd
      ->add_option("suite", suite,
                   "ir, ic, lemma1, revenue, crm_equivalence, or all")
      ->required()
      ->check(CLI::IsMember(
          {"ir", "ic", "lemma1", "revenue", "crm_equivalence", "all"}));
  verify_cmd->add_option("--graph", graph,
                         "run on this instance instead of a random battery");
  verify_cmd->add_option("--seed", seed, "master seed");
  verify_cmd->add_option("--samples", samples, "battery size scale");
  verify_cmd->add_option("--out", out_dir, "report directory");
  verify_cmd->add_flag("--sabotage-first-price", sabotage,
                       "swap in a broken first-price payment rule (negative "
                       "control, the ic suite must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (run_sra_cmd->parsed()) {
      const sra::Instance instance = sra::parse_instance_file(graph);
      const sra::SraOutcome outcome =
          sra::run_sra(instance, sra::intended_profile(instance), seed);
      const std::string text = sra::serialize_trace(instance, outcome);
      std::cout << text;
      write_out(out_dir, "trace.txt", text);
      const auto problems = sra::check_trace_invariants(instance, outcome);
      for (const std::string& p : problems) {
        std::cerr << "trace violation: " << p << "\n";
      }
      return problems.empty() ? kExitOk : kExitViolation;
    }

    if (run_crm_cmd->parsed()) {
      const sra::Instance instance = sra::parse_instance_file(graph);
      sra::CrmOptions options;
      options.distribution = sra::parse_tree_distribution(distribution);
      options.samples = tree_samples < 0 ? 0 : tree_samples;
      options.seed = seed;
      const sra::OutcomeSummary summary = sra::crm_run(
          instance, sra::truthful_report(instance), options);
      const std::string text = sra::serialize_summary(
          instance, summary, "crm",
          sra::distribution_name(options.distribution));
      std::cout << text;
      write_out(out_dir, "crm.txt", text);
      return kExitOk;
    }

    if (run_idm_cmd->parsed()) {
      const sra::Instance instance = sra::parse_instance_file(graph);
      const sra::IdmOutcome outcome =
          sra::idm_run(instance, sra::truthful_report(instance), seed);
      const std::string text = sra::serialize_summary(
          instance, sra::to_summary(instance, outcome), "idm", "");
      std::cout << text;
      write_out(out_dir, "idm.txt", text);
      return kExitOk;
    }

    if (run_vcg_cmd->parsed()) {
      const sra::Instance instance = sra::parse_instance_file(graph);
      const sra::VcgOutcome outcome =
          sra::vcg_neighbors(instance, sra::truthful_report(instance));
      const std::string text = sra::serialize_summary(
          instance, sra::to_summary(instance, outcome), "vcg", "");
      std::cout << text;
      write_out(out_dir, "vcg.txt", text);
      return kExitOk;
    }

    if (experiment_cmd->parsed()) {
      sra::ExperimentConfig config;
      if (!config_path.empty()) {
        config = sra::load_experiment_config(config_path);
      }
      if (!graph.empty()) config.graph_path = graph;
      if (experiment_cmd->count("--seed")) config.seed = seed;
      if (samples >= 0) config.instances = samples;
      if (tree_samples >= 0) config.tree_samples = tree_samples;
      if (experiment_cmd->count("--tree-distribution")) {
        config.distribution = sra::parse_tree_distribution(distribution);
      }
      if (config.graph_path.empty()) {
        throw sra::InputError(
            "no graph file: give --graph or a config with \"graph\"");
      }
      if (config.instances < 1) {
        throw sra::InputError("--samples must be at least 1");
      }
      const sra::Instance instance =
          sra::parse_instance_file(config.graph_path);
      const sra::ExperimentResult result =
          sra::run_experiment(instance, config);
      sra::write_experiment(result, out_dir);
      std::cout << "wrote " << result.csv.size() << " mechanism tables and "
                << "summary.json to " << out_dir << "\n";
      return kExitOk;
    }

    VerifyContext ctx;
    ctx.graph = graph;
    ctx.seed = seed;
    if (samples >= 1) ctx.samples = samples;
    ctx.out_dir = out_dir;
    ctx.sabotage_first_price = sabotage;
    return run_verify(ctx, suite);
  } catch (const sra::ManipulationDetected& e) {
    std::cerr << "manipulation detected: " << e.what() << "\n";
    return kExitViolation;
  } catch (const sra::EnumerationCapExceeded& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const sra::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
