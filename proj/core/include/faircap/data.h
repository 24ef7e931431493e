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

// Tabular data model: attribute schema with mutable/immutable/outcome roles,
// predicates and patterns over attributes, and pattern coverage.
//
// Cells are stored column-major as doubles. Categorical cells hold the index
// of their label in the attribute's domain list, so predicates on categorical
// attributes compare label codes.

#ifndef FAIRCAP_DATA_H_
#define FAIRCAP_DATA_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace faircap {

enum class Role { kImmutable, kMutable, kOutcome };

std::string_view RoleName(Role role);

struct CategoricalDomain {
  std::vector<std::string> labels;
};

struct NumericDomain {
  double min = 0.0;
  double max = 0.0;
};

struct AttributeSpec {
  std::string name;
  Role role = Role::kImmutable;
  std::variant<CategoricalDomain, NumericDomain> domain;

  bool is_categorical() const {
    return std::holds_alternative<CategoricalDomain>(domain);
  }
  // Requires is_categorical().
  const std::vector<std::string>& labels() const {
    return std::get<CategoricalDomain>(domain).labels;
  }
};

// Ordered attribute list. Construction enforces: unique names, exactly one
// Numeric outcome, non-empty categorical domains with distinct labels.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeSpec> attributes);

  size_t size() const { return attributes_.size(); }
  const AttributeSpec& attribute(size_t index) const {
    return attributes_[index];
  }
  const std::vector<AttributeSpec>& attributes() const { return attributes_; }

  std::optional<size_t> Find(std::string_view name) const;
  // Throws Error(kUnknownAttribute).
  size_t IndexOf(std::string_view name) const;

  size_t outcome_index() const { return outcome_index_; }
  const std::string& outcome_name() const {
    return attributes_[outcome_index_].name;
  }
  std::vector<size_t> IndicesWithRole(Role role) const;

  // Code of `label` in a categorical attribute's domain. Throws
  // kInvalidPattern when the label is not in the domain.
  double CodeOf(size_t attribute, std::string_view label) const;
  // Label text for a value; numeric values are printed with %g.
  std::string ValueText(size_t attribute, double value) const;

 private:
  std::vector<AttributeSpec> attributes_;
  std::unordered_map<std::string, size_t> index_;
  size_t outcome_index_ = 0;
};

enum class Op { kEq, kNe, kLt, kGt, kLe, kGe };

std::string_view OpSymbol(Op op);
std::optional<Op> ParseOp(std::string_view symbol);

// `cell op value`.
bool CompareCell(Op op, double cell, double value);

struct Predicate {
  std::string attribute;
  Op op = Op::kEq;
  double value = 0.0;

  auto operator<=>(const Predicate&) const = default;
  bool operator==(const Predicate&) const = default;
};

// Builds a predicate from label text, validating against the schema.
// Categorical attributes accept only = and != and a label from the domain;
// numeric attributes parse `value_text` as a number.
Predicate MakePredicate(const Schema& schema, std::string_view attribute,
                        Op op, std::string_view value_text);

// A conjunction of predicates kept in canonical (sorted) order. No two
// predicates may share the same (attribute, op) pair. The empty pattern
// covers every row.
class Pattern {
 public:
  Pattern() = default;
  explicit Pattern(std::vector<Predicate> predicates);

  const std::vector<Predicate>& predicates() const { return predicates_; }
  bool empty() const { return predicates_.empty(); }
  size_t size() const { return predicates_.size(); }

  // Returns this pattern extended by `predicate`.
  Pattern With(const Predicate& predicate) const;
  std::vector<std::string> Attributes() const;

  auto operator<=>(const Pattern&) const = default;
  bool operator==(const Pattern&) const = default;

 private:
  std::vector<Predicate> predicates_;
};

std::string FormatPredicate(const Predicate& predicate, const Schema& schema);
// Predicates joined by `separator`; "(all)" for the empty pattern.
std::string FormatPattern(const Pattern& pattern, const Schema& schema,
                          std::string_view separator = " AND ");

struct CoverageSet {
  std::vector<uint32_t> row_ids;  // sorted ascending
  size_t count = 0;
  size_t protected_count = 0;

  bool operator==(const CoverageSet&) const = default;
};

class Dataset {
 public:
  // `columns[a][r]` is the cell of attribute a in row r. Throws
  // kInvalidDataset on shape mismatch, out-of-domain codes, non-finite
  // cells or zero rows. The protected pattern's coverage is computed here.
  Dataset(Schema schema, std::vector<std::vector<double>> columns,
          Pattern protected_pattern);

  const Schema& schema() const { return schema_; }
  size_t num_rows() const { return num_rows_; }
  double cell(size_t row, size_t attribute) const {
    return columns_[attribute][row];
  }
  std::span<const double> column(size_t attribute) const {
    return columns_[attribute];
  }
  std::span<const double> outcome() const {
    return columns_[schema_.outcome_index()];
  }

  const Pattern& protected_pattern() const { return protected_pattern_; }
  bool is_protected(size_t row) const { return protected_mask_[row] != 0; }
  size_t num_protected() const { return num_protected_; }
  size_t num_nonprotected() const { return num_rows_ - num_protected_; }

 private:
  Schema schema_;
  std::vector<std::vector<double>> columns_;
  size_t num_rows_ = 0;
  Pattern protected_pattern_;
  std::vector<uint8_t> protected_mask_;
  size_t num_protected_ = 0;
};

// Throws kUnknownAttribute if the attribute is missing, kInvalidPattern for
// an ordering comparison on a categorical attribute.
bool EvaluatePredicate(const Predicate& predicate, const Dataset& dataset,
                       size_t row);

bool Matches(const Pattern& pattern, const Dataset& dataset, size_t row);

CoverageSet Coverage(const Pattern& pattern, const Dataset& dataset);

// Rows of `coverage` that are protected (or not).
std::vector<uint32_t> ProtectedRows(const CoverageSet& coverage,
                                    const Dataset& dataset);
std::vector<uint32_t> NonProtectedRows(const CoverageSet& coverage,
                                       const Dataset& dataset);

// True iff every predicate of `parent` also appears in `child`.
bool PatternRefines(const Pattern& child, const Pattern& parent);

}  // namespace faircap

#endif  // FAIRCAP_DATA_H_
