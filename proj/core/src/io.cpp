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

#include "sra/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sra {

std::string format_number(double x) {
  if (x == 0) return "0";  // merges the two float zeros
  char buf[40];
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", x);
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

Instance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("graph file must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "seller" && key != "buyers") {
      throw InputError("unknown top-level key in graph file: " + key);
    }
  }
  if (!doc.contains("seller") || !doc["seller"].is_string()) {
    throw InputError("graph file needs a string field \"seller\"");
  }
  if (!doc.contains("buyers") || !doc["buyers"].is_array()) {
    throw InputError("graph file needs an array field \"buyers\"");
  }
  const std::string seller = doc["seller"].get<std::string>();
  std::vector<BuyerSpec> buyers;
  for (const auto& entry : doc["buyers"]) {
    if (!entry.is_object()) {
      throw InputError("every buyers[] entry must be an object");
    }
    for (const auto& [key, value] : entry.items()) {
      (void)value;
      if (key != "id" && key != "valuation" && key != "neighbors") {
        throw InputError("unknown key in a buyers[] entry: " + key);
      }
    }
    BuyerSpec spec;
    if (!entry.contains("id") || !entry["id"].is_string()) {
      throw InputError("every buyers[] entry needs a string \"id\"");
    }
    spec.id = entry["id"].get<std::string>();
    if (spec.id == seller) {
      throw InputError("the seller cannot appear in the buyers list");
    }
    if (entry.contains("valuation")) {
      if (!entry["valuation"].is_number()) {
        throw InputError("valuation of " + spec.id + " must be a number");
      }
      spec.valuation = entry["valuation"].get<double>();
    }
    if (entry.contains("neighbors")) {
      if (!entry["neighbors"].is_array()) {
        throw InputError("neighbors of " + spec.id + " must be an array");
      }
      for (const auto& nb : entry["neighbors"]) {
        if (!nb.is_string()) {
          throw InputError("neighbors of " + spec.id + " must be id strings");
        }
        spec.neighbors.push_back(nb.get<std::string>());
      }
    }
    buyers.push_back(std::move(spec));
  }
  return make_instance(seller, std::move(buyers));
}

Instance parse_instance_file(const std::string& path) {
  return parse_instance(read_text_file(path));
}

std::string serialize_instance(const Instance& instance) {
  nlohmann::ordered_json doc;
  doc["seller"] = instance.id(0);
  doc["buyers"] = nlohmann::ordered_json::array();
  for (int i = 1; i < instance.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["id"] = instance.id(i);
    entry["valuation"] = instance.valuations[i];
    nlohmann::ordered_json neighbors = nlohmann::ordered_json::array();
    for (int j : instance.neighbors[i]) neighbors.push_back(instance.id(j));
    entry["neighbors"] = std::move(neighbors);
    doc["buyers"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string serialize_trace(const Instance& instance,
                            const SraOutcome& outcome) {
  std::ostringstream out;
  const ResaleTrace& trace = outcome.trace;
  for (std::size_t k = 0; k < trace.auctions.size(); ++k) {
    const LocalAuction& a = trace.auctions[k];
    out << "auction " << (k + 1) << ": host=" << instance.id(a.host)
        << " reserve=" << format_number(a.reserve) << " bids=[";
    for (std::size_t b = 0; b < a.bids.size(); ++b) {
      if (b) out << ", ";
      out << instance.id(a.bids[b].first) << "="
          << format_number(a.bids[b].second);
    }
    out << "] winner="
        << (a.winner < 0 ? std::string("keep") : instance.id(a.winner))
        << " price=" << format_number(a.price) << "\n";
  }
  out << "final: winner=" << instance.id(trace.winner)
      << " revenue=" << format_number(trace.revenue) << "\n";
  out << "payments:";
  for (int i = 1; i < instance.size(); ++i) {
    out << " " << instance.id(i) << "=" << format_number(trace.payment[i]);
  }
  out << "\n";
  return out.str();
}

std::string serialize_summary(const Instance& instance,
                              const OutcomeSummary& summary,
                              const std::string& mechanism,
                              const std::string& distribution) {
  std::ostringstream out;
  out << "mechanism: " << mechanism << "\n";
  if (!distribution.empty()) out << "distribution: " << distribution << "\n";
  if (summary.tree_count > 0) {
    out << "evaluation: " << (summary.exact ? "exact over " : "sampled over ")
        << summary.tree_count << " trees\n";
  } else {
    out << "evaluation: deterministic\n";
  }
  out << "revenue: " << format_number(summary.revenue) << "\n";
  out << "seller_keeps: " << format_number(summary.win_prob[0]) << "\n";
  for (int i = 1; i < instance.size(); ++i) {
    out << "agent " << instance.id(i)
        << ": win_prob=" << format_number(summary.win_prob[i])
        << " payment=" << format_number(summary.payment[i])
        << " utility=" << format_number(summary.utility[i]) << "\n";
  }
  return out.str();
}

std::string serialize_report(const PropertyReport& report) {
  std::ostringstream out;
  out << "property: " << report.property << "\n";
  out << "instances: " << report.instances << "\n";
  out << "trials: " << report.trials << "\n";
  out << "tolerance: " << format_number(report.tolerance) << "\n";
  out << "max_gap: " << format_number(report.max_gap) << "\n";
  out << "violations: " << report.violations.size() << "\n";
  for (const DeviationRecord& r : report.violations) {
    out << "  violation: " << r.instance << " | " << r.deviation
        << " | intended=" << format_number(r.intended)
        << " deviant=" << format_number(r.deviant)
        << " gap=" << format_number(r.gap) << "\n";
  }
  out << "anomalies: " << report.anomalies.size() << "\n";
  std::size_t shown = 0;
  for (const DeviationRecord& r : report.anomalies) {
    if (shown == 50) {
      out << "  ... and " << (report.anomalies.size() - shown) << " more\n";
      break;
    }
    ++shown;
    out << "  anomaly: " << r.instance << " | " << r.deviation
        << " | intended=" << format_number(r.intended)
        << " deviant=" << format_number(r.deviant)
        << " gap=" << format_number(r.gap) << "\n";
  }
  for (const std::string& note : report.notes) {
    out << "note: " << note << "\n";
  }
  out << "result: " << (report.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
  if (!out) throw InputError("short write to file: " + path);
}

}  // namespace sra
