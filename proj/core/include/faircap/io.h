// Copyright 2026 The FairCap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File formats: CSV datasets with a declared schema, the DOT subset used
// for causal DAGs, key = value run configs and the JSON ruleset report.
//
// Parse failures carry "<source>:<line>: " prefixes.

#ifndef FAIRCAP_IO_H_
#define FAIRCAP_IO_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "faircap/causal.h"
#include "faircap/data.h"
#include "faircap/pipeline.h"
#include "faircap/selection_config.h"
#include "faircap/selector.h"

namespace faircap::io {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<size_t> line_numbers;  // first line of each row
};

// RFC 4180 style: comma separated, double-quoted fields with "" escapes.
// Throws kParseError on ragged rows or unterminated quotes.
CsvTable ReadCsv(std::istream& in, const std::string& source);
CsvTable ReadCsvFile(const std::filesystem::path& path);
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);

enum class MissingPolicy { kReject, kDrop };

struct SchemaDeclaration {
  std::string outcome;
  std::vector<std::string> immutable;
  std::vector<std::string> mutable_attributes;
  // Immutable or mutable columns holding numbers; they are cut into
  // `bins` equal-frequency bins labelled "[lo, hi)" (last bin closed).
  std::vector<std::string> numeric;
  size_t bins = 5;
  MissingPolicy missing = MissingPolicy::kReject;
};

// Columns not named by the declaration are ignored. Categorical labels
// are sorted lexicographically; bins keep value order. Empty and "NA"
// cells are missing.
Dataset BuildDataset(const CsvTable& table, const SchemaDeclaration& schema,
                     std::string_view protected_pattern,
                     const std::string& source);

// Writes labels for categorical cells and numbers with full precision.
void WriteDatasetCsv(std::ostream& out, const Dataset& dataset);

// "A = x; B != y". Whitespace around names and values is trimmed; the
// empty string is the empty pattern. Throws kInvalidPattern and
// kUnknownAttribute.
Pattern ParsePattern(std::string_view text, const Schema& schema);
std::string PatternText(const Pattern& pattern, const Schema& schema);

// Lines of the form `A -> B;`, `#` comments and blank lines. A `digraph
// name {` opener and a closing `}` are tolerated.
CausalDag ParseDot(std::istream& in, const std::string& source);
CausalDag ReadDotFile(const std::filesystem::path& path);
std::string WriteDot(const CausalDag& dag);

struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path dag;
  std::filesystem::path output;    // report JSON; empty means stdout
  std::filesystem::path markdown;  // optional markdown summary
  SchemaDeclaration schema;
  std::string protected_pattern;
  SelectionConfig selection;
  MiningOptions mining;
};

// Relative paths are resolved against `base_dir`. Throws kInvalidConfig.
RunConfig ParseRunConfig(std::istream& in, const std::filesystem::path& base_dir,
                         const std::string& source);
RunConfig LoadRunConfig(const std::filesystem::path& path);

struct LoadedInputs {
  Dataset dataset;
  CausalDag dag;
};

// Reads and validates the dataset and DAG named by `config`.
LoadedInputs LoadInputs(const RunConfig& config);

inline constexpr int kReportSchemaVersion = 1;

// Deterministic JSON (no timestamps, no worker count).
std::string RenderReport(const RunConfig& config, const Dataset& dataset,
                         const PipelineResult& result);

struct ReportedRule {
  Pattern grouping;
  Pattern intervention;
  double utility = 0.0;
  double utility_p = 0.0;
  double utility_np = 0.0;
  size_t coverage = 0;
};

struct ParsedReport {
  std::string status;
  RulesetMetrics metrics;
  std::vector<ReportedRule> rules;
};

// Throws kSchemaMismatch for a wrong version, missing fields or rules that
// do not fit `schema`.
ParsedReport ParseReport(std::string_view text, const Schema& schema);

struct ReportCheck {
  RulesetMetrics recomputed;
  std::vector<std::string> mismatches;  // empty when the report matches

  bool matches() const { return mismatches.empty(); }
};

// Recomputes every rule's coverage and utilities and the ruleset metrics
// from the inputs, and compares them with the reported values.
ReportCheck CheckReport(const ParsedReport& report, const LoadedInputs& inputs,
                        const RunConfig& config);

}  // namespace faircap::io

#endif  // FAIRCAP_IO_H_
