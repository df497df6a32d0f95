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

#ifndef SRA_IO_HPP_
#define SRA_IO_HPP_

#include <string>

#include "sra/crm.hpp"
#include "sra/engine.hpp"
#include "sra/harness.hpp"
#include "sra/types.hpp"

namespace sra {

// Shortest decimal that parses back to exactly `x`; integral values print
// without a decimal point.  Every serialized number goes through this, so
// outputs are byte-stable across runs and round-trip through parsers.
std::string format_number(double x);

// Graph files are JSON: {"seller": "<id>", "buyers": [{"id", "valuation",
// "neighbors": ["<id>", ...]}, ...]}.  Neighbor listings may be one-sided;
// the parser symmetrizes.  Unknown keys are rejected so typos fail loudly.
Instance parse_instance(const std::string& text);
Instance parse_instance_file(const std::string& path);
std::string serialize_instance(const Instance& instance);

// One line per local auction with a stable field order, then the final
// holder, the revenue, and each buyer's net payment.
std::string serialize_trace(const Instance& instance,
                            const SraOutcome& outcome);

// Header lines, then one row per buyer: win probability, expected payment,
// expected utility.  `distribution` may be empty for deterministic
// mechanisms.
std::string serialize_summary(const Instance& instance,
                              const OutcomeSummary& summary,
                              const std::string& mechanism,
                              const std::string& distribution);

// Header lines, every violation row, a bounded sample of anomaly rows, the
// notes, and a final PASS or FAIL line.
std::string serialize_report(const PropertyReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sra

#endif  // SRA_IO_HPP_
