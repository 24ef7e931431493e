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

#include "faircap/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <set>
#include <utility>

#include "faircap/error.h"

namespace faircap {
namespace {

std::optional<double> ParseNumber(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

bool CompareCell(Op op, double cell, double value) {
  switch (op) {
    case Op::kEq:
      return cell == value;
    case Op::kNe:
      return cell != value;
    case Op::kLt:
      return cell < value;
    case Op::kGt:
      return cell > value;
    case Op::kLe:
      return cell <= value;
    case Op::kGe:
      return cell >= value;
  }
  return false;
}

namespace {

bool IsOrdering(Op op) { return op != Op::kEq && op != Op::kNe; }

struct ResolvedPredicate {
  size_t column;
  Op op;
  double value;
};

std::vector<ResolvedPredicate> Resolve(const Pattern& pattern,
                                       const Schema& schema) {
  std::vector<ResolvedPredicate> resolved;
  resolved.reserve(pattern.size());
  for (const Predicate& p : pattern.predicates()) {
    const size_t column = schema.IndexOf(p.attribute);
    if (IsOrdering(p.op) && schema.attribute(column).is_categorical()) {
      throw Error(ErrorCode::kInvalidPattern,
                  "ordering comparison on categorical attribute '" +
                      p.attribute + "'");
    }
    resolved.push_back({column, p.op, p.value});
  }
  return resolved;
}

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kImmutable:
      return "immutable";
    case Role::kMutable:
      return "mutable";
    case Role::kOutcome:
      return "outcome";
  }
  return "?";
}

Schema::Schema(std::vector<AttributeSpec> attributes)
    : attributes_(std::move(attributes)) {
  size_t outcomes = 0;
  for (size_t i = 0; i < attributes_.size(); ++i) {
    const AttributeSpec& spec = attributes_[i];
    if (spec.name.empty()) {
      throw Error(ErrorCode::kInvalidSchema, "empty attribute name");
    }
    if (!index_.emplace(spec.name, i).second) {
      throw Error(ErrorCode::kInvalidSchema,
                  "duplicate attribute '" + spec.name + "'");
    }
    if (spec.role == Role::kOutcome) {
      ++outcomes;
      outcome_index_ = i;
      if (spec.is_categorical()) {
        throw Error(ErrorCode::kInvalidSchema,
                    "outcome '" + spec.name + "' must be numeric");
      }
    }
    if (spec.is_categorical()) {
      const auto& labels = spec.labels();
      if (labels.empty()) {
        throw Error(ErrorCode::kInvalidSchema,
                    "empty domain for '" + spec.name + "'");
      }
      std::set<std::string_view> seen(labels.begin(), labels.end());
      if (seen.size() != labels.size()) {
        throw Error(ErrorCode::kInvalidSchema,
                    "duplicate labels in domain of '" + spec.name + "'");
      }
    }
  }
  if (outcomes != 1) {
    throw Error(ErrorCode::kInvalidSchema,
                "schema needs exactly one outcome, found " +
                    std::to_string(outcomes));
  }
}

std::optional<size_t> Schema::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

size_t Schema::IndexOf(std::string_view name) const {
  auto found = Find(name);
  if (!found) {
    throw Error(ErrorCode::kUnknownAttribute,
                "no attribute named '" + std::string(name) + "'");
  }
  return *found;
}

std::vector<size_t> Schema::IndicesWithRole(Role role) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].role == role) out.push_back(i);
  }
  return out;
}

double Schema::CodeOf(size_t attribute, std::string_view label) const {
  const auto& labels = attributes_[attribute].labels();
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw Error(ErrorCode::kInvalidPattern,
                "value '" + std::string(label) + "' not in domain of '" +
                    attributes_[attribute].name + "'");
  }
  return static_cast<double>(std::distance(labels.begin(), it));
}

std::string Schema::ValueText(size_t attribute, double value) const {
  const AttributeSpec& spec = attributes_[attribute];
  if (spec.is_categorical()) {
    const auto code = static_cast<size_t>(value);
    if (value >= 0 && code < spec.labels().size()) return spec.labels()[code];
    return "?";
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

std::string_view OpSymbol(Op op) {
  switch (op) {
    case Op::kEq:
      return "=";
    case Op::kNe:
      return "!=";
    case Op::kLt:
      return "<";
    case Op::kGt:
      return ">";
    case Op::kLe:
      return "<=";
    case Op::kGe:
      return ">=";
  }
  return "?";
}

std::optional<Op> ParseOp(std::string_view symbol) {
  if (symbol == "=" || symbol == "==") return Op::kEq;
  if (symbol == "!=" || symbol == "<>") return Op::kNe;
  if (symbol == "<") return Op::kLt;
  if (symbol == ">") return Op::kGt;
  if (symbol == "<=") return Op::kLe;
  if (symbol == ">=") return Op::kGe;
  return std::nullopt;
}

Predicate MakePredicate(const Schema& schema, std::string_view attribute,
                        Op op, std::string_view value_text) {
  const size_t column = schema.IndexOf(attribute);
  const AttributeSpec& spec = schema.attribute(column);
  Predicate predicate{spec.name, op, 0.0};
  if (spec.is_categorical()) {
    if (IsOrdering(op)) {
      throw Error(ErrorCode::kInvalidPattern,
                  "ordering comparison on categorical attribute '" +
                      spec.name + "'");
    }
    predicate.value = schema.CodeOf(column, value_text);
  } else {
    auto number = ParseNumber(value_text);
    if (!number) {
      throw Error(ErrorCode::kInvalidPattern,
                  "'" + std::string(value_text) + "' is not a number for '" +
                      spec.name + "'");
    }
    predicate.value = *number;
  }
  return predicate;
}

Pattern::Pattern(std::vector<Predicate> predicates)
    : predicates_(std::move(predicates)) {
  std::sort(predicates_.begin(), predicates_.end());
  for (size_t i = 1; i < predicates_.size(); ++i) {
    if (predicates_[i].attribute == predicates_[i - 1].attribute &&
        predicates_[i].op == predicates_[i - 1].op) {
      throw Error(ErrorCode::kInvalidPattern,
                  "two predicates share (" + predicates_[i].attribute + ", " +
                      std::string(OpSymbol(predicates_[i].op)) + ")");
    }
  }
}

Pattern Pattern::With(const Predicate& predicate) const {
  std::vector<Predicate> extended = predicates_;
  extended.push_back(predicate);
  return Pattern(std::move(extended));
}

std::vector<std::string> Pattern::Attributes() const {
  std::vector<std::string> names;
  for (const Predicate& p : predicates_) {
    if (names.empty() || names.back() != p.attribute) {
      names.push_back(p.attribute);
    }
  }
  return names;
}

std::string FormatPredicate(const Predicate& predicate, const Schema& schema) {
  const size_t column = schema.IndexOf(predicate.attribute);
  return predicate.attribute + " " + std::string(OpSymbol(predicate.op)) +
         " " + schema.ValueText(column, predicate.value);
}

std::string FormatPattern(const Pattern& pattern, const Schema& schema,
                          std::string_view separator) {
  if (pattern.empty()) return "(all)";
  std::string out;
  for (const Predicate& p : pattern.predicates()) {
    if (!out.empty()) out += separator;
    out += FormatPredicate(p, schema);
  }
  return out;
}

Dataset::Dataset(Schema schema, std::vector<std::vector<double>> columns,
                 Pattern protected_pattern)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      protected_pattern_(std::move(protected_pattern)) {
  if (columns_.size() != schema_.size()) {
    throw Error(ErrorCode::kInvalidDataset,
                "column count does not match schema");
  }
  num_rows_ = columns_.empty() ? 0 : columns_[0].size();
  if (num_rows_ == 0) {
    throw Error(ErrorCode::kInvalidDataset, "dataset has no rows");
  }
  for (size_t a = 0; a < columns_.size(); ++a) {
    const AttributeSpec& spec = schema_.attribute(a);
    if (columns_[a].size() != num_rows_) {
      throw Error(ErrorCode::kInvalidDataset,
                  "ragged column '" + spec.name + "'");
    }
    const double domain_size =
        spec.is_categorical() ? static_cast<double>(spec.labels().size())
                              : 0.0;
    for (size_t r = 0; r < num_rows_; ++r) {
      const double v = columns_[a][r];
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidDataset,
                    "missing or non-finite cell in '" + spec.name +
                        "' at row " + std::to_string(r));
      }
      if (spec.is_categorical() &&
          (v < 0 || v >= domain_size || v != std::floor(v))) {
        throw Error(ErrorCode::kInvalidDataset,
                    "cell outside domain of '" + spec.name + "' at row " +
                        std::to_string(r));
      }
    }
  }
  const auto resolved = Resolve(protected_pattern_, schema_);
  protected_mask_.assign(num_rows_, 0);
  for (size_t r = 0; r < num_rows_; ++r) {
    bool hit = true;
    for (const auto& p : resolved) {
      if (!CompareCell(p.op, columns_[p.column][r], p.value)) {
        hit = false;
        break;
      }
    }
    protected_mask_[r] = hit ? 1 : 0;
    num_protected_ += hit ? 1 : 0;
  }
}

bool EvaluatePredicate(const Predicate& predicate, const Dataset& dataset,
                       size_t row) {
  const size_t column = dataset.schema().IndexOf(predicate.attribute);
  if (IsOrdering(predicate.op) &&
      dataset.schema().attribute(column).is_categorical()) {
    throw Error(ErrorCode::kInvalidPattern,
                "ordering comparison on categorical attribute '" +
                    predicate.attribute + "'");
  }
  return CompareCell(predicate.op, dataset.cell(row, column), predicate.value);
}

bool Matches(const Pattern& pattern, const Dataset& dataset, size_t row) {
  for (const Predicate& p : pattern.predicates()) {
    if (!EvaluatePredicate(p, dataset, row)) return false;
  }
  return true;
}

CoverageSet Coverage(const Pattern& pattern, const Dataset& dataset) {
  const auto resolved = Resolve(pattern, dataset.schema());
  CoverageSet coverage;
  for (size_t r = 0; r < dataset.num_rows(); ++r) {
    bool hit = true;
    for (const auto& p : resolved) {
      if (!CompareCell(p.op, dataset.cell(r, p.column), p.value)) {
        hit = false;
        break;
      }
    }
    if (!hit) continue;
    coverage.row_ids.push_back(static_cast<uint32_t>(r));
    if (dataset.is_protected(r)) ++coverage.protected_count;
  }
  coverage.count = coverage.row_ids.size();
  return coverage;
}

std::vector<uint32_t> ProtectedRows(const CoverageSet& coverage,
                                    const Dataset& dataset) {
  std::vector<uint32_t> rows;
  rows.reserve(coverage.protected_count);
  for (uint32_t r : coverage.row_ids) {
    if (dataset.is_protected(r)) rows.push_back(r);
  }
  return rows;
}

std::vector<uint32_t> NonProtectedRows(const CoverageSet& coverage,
                                       const Dataset& dataset) {
  std::vector<uint32_t> rows;
  rows.reserve(coverage.count - coverage.protected_count);
  for (uint32_t r : coverage.row_ids) {
    if (!dataset.is_protected(r)) rows.push_back(r);
  }
  return rows;
}

bool PatternRefines(const Pattern& child, const Pattern& parent) {
  // Both predicate lists are sorted.
  return std::includes(child.predicates().begin(), child.predicates().end(),
                       parent.predicates().begin(), parent.predicates().end());
}

}  // namespace faircap
