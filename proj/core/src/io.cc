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

#include "faircap/io.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "faircap/error.h"
#include "faircap/evaluation.h"
#include "json.hpp"

namespace faircap::io {
namespace {

using Json = nlohmann::ordered_json;

std::string_view Trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '\n';
  };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string At(const std::string& source, size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::string ReadAll(const std::filesystem::path& path, ErrorCode code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(code, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

bool ParseDouble(std::string_view text, double& out) {
  const std::string s(Trim(text));
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool ParseSize(std::string_view text, size_t& out) {
  const std::string s(Trim(text));
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    return false;
  }
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
  if (errno != 0) return false;
  out = static_cast<size_t>(v);
  return true;
}

bool IsMissing(std::string_view cell) {
  const std::string_view t = Trim(cell);
  return t.empty() || t == "NA";
}

std::string NumberText(double x, const char* format) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

// Equal-frequency bin edges: min, the distinct interior quantile cuts, max.
std::vector<double> BinEdges(std::vector<double> values, size_t bins) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  std::vector<double> edges{values.front()};
  for (size_t j = 1; j < bins; ++j) {
    const double cut = values[j * n / bins];
    if (cut > edges.back()) edges.push_back(cut);
  }
  if (values.back() > edges.back()) edges.push_back(values.back());
  return edges;
}

Json PatternJson(const Pattern& pattern, const Schema& schema) {
  Json out = Json::array();
  for (const Predicate& p : pattern.predicates()) {
    const size_t a = schema.IndexOf(p.attribute);
    out.push_back({{"attribute", p.attribute},
                   {"op", std::string(OpSymbol(p.op))},
                   {"value", schema.ValueText(a, p.value)}});
  }
  return out;
}

Pattern PatternFromJson(const Json& j, const Schema& schema) {
  std::vector<Predicate> predicates;
  for (const Json& p : j) {
    const std::string op_text = p.at("op").get<std::string>();
    const auto op = ParseOp(op_text);
    if (!op) {
      throw Error(ErrorCode::kSchemaMismatch, "unknown operator " + op_text);
    }
    predicates.push_back(MakePredicate(schema,
                                       p.at("attribute").get<std::string>(),
                                       *op, p.at("value").get<std::string>()));
  }
  return Pattern(std::move(predicates));
}

Json MetricsJson(const RulesetMetrics& m) {
  return {{"size", m.size},
          {"coverage", m.coverage_frac},
          {"coverage_protected", m.coverage_p_frac},
          {"exp_utility", m.exp_utility},
          {"exp_utility_protected", m.exp_utility_p},
          {"exp_utility_nonprotected", m.exp_utility_np},
          {"unfairness", m.unfairness}};
}

bool Close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a),
                                                          std::abs(b)));
}

}  // namespace

CsvTable ReadCsv(std::istream& in, const std::string& source) {
  const std::string text(std::istreambuf_iterator<char>(in), {});
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  size_t line = 1;
  size_t record_line = 1;
  bool in_quotes = false;
  bool field_quoted = false;
  bool any = false;  // current record has content
  bool have_header = false;

  auto end_record = [&] {
    if (!any && record.empty() && field.empty()) return;
    record.push_back(std::move(field));
    field.clear();
    if (!have_header) {
      table.header = std::move(record);
      have_header = true;
    } else {
      if (record.size() != table.header.size()) {
        throw Error(ErrorCode::kParseError,
                    At(source, record_line) + "expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(record.size()));
      }
      table.rows.push_back(std::move(record));
      table.line_numbers.push_back(record_line);
    }
    record.clear();
    any = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_quoted) {
          throw Error(ErrorCode::kParseError,
                      At(source, line) + "stray quote inside a field");
        }
        in_quotes = true;
        field_quoted = true;
        any = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_quoted = false;
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        field_quoted = false;
        ++line;
        record_line = line;
        break;
      default:
        if (field_quoted) {
          throw Error(ErrorCode::kParseError,
                      At(source, line) + "text after a closing quote");
        }
        field += c;
        any = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParseError,
                At(source, record_line) + "unterminated quoted field");
  }
  end_record();
  if (!have_header) {
    throw Error(ErrorCode::kParseError, source + ": missing header row");
  }
  return table;
}

CsvTable ReadCsvFile(const std::filesystem::path& path) {
  std::istringstream in(ReadAll(path, ErrorCode::kParseError));
  return ReadCsv(in, path.string());
}

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

Dataset BuildDataset(const CsvTable& table, const SchemaDeclaration& decl,
                     std::string_view protected_pattern,
                     const std::string& source) {
  std::unordered_map<std::string, size_t> header;
  for (size_t i = 0; i < table.header.size(); ++i) {
    const std::string name(Trim(table.header[i]));
    if (!header.emplace(name, i).second) {
      throw Error(ErrorCode::kParseError,
                  source + ": duplicate column '" + name + "'");
    }
  }
  if (decl.bins < 1) {
    throw Error(ErrorCode::kInvalidSchema, "bins must be at least 1");
  }
  std::map<std::string, Role> roles;
  auto declare = [&](const std::string& name, Role role) {
    if (!header.count(name)) {
      throw Error(ErrorCode::kInvalidSchema,
                  source + ": column '" + name + "' not found");
    }
    if (!roles.emplace(name, role).second) {
      throw Error(ErrorCode::kInvalidSchema,
                  "attribute '" + name + "' declared twice");
    }
  };
  if (decl.outcome.empty()) {
    throw Error(ErrorCode::kInvalidSchema, "no outcome declared");
  }
  declare(decl.outcome, Role::kOutcome);
  for (const std::string& a : decl.immutable) declare(a, Role::kImmutable);
  for (const std::string& a : decl.mutable_attributes) {
    declare(a, Role::kMutable);
  }
  const std::set<std::string> numeric(decl.numeric.begin(), decl.numeric.end());
  for (const std::string& a : numeric) {
    auto it = roles.find(a);
    if (it == roles.end() || it->second == Role::kOutcome) {
      throw Error(ErrorCode::kInvalidSchema,
                  "numeric attribute '" + a +
                      "' must be declared immutable or mutable");
    }
  }

  // Attributes in header order.
  std::vector<std::pair<std::string, size_t>> used;
  for (size_t i = 0; i < table.header.size(); ++i) {
    const std::string name(Trim(table.header[i]));
    if (roles.count(name)) used.emplace_back(name, i);
  }

  std::vector<size_t> kept_rows;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    bool missing = false;
    for (const auto& [name, col] : used) {
      if (!IsMissing(table.rows[r][col])) continue;
      if (decl.missing == MissingPolicy::kReject) {
        throw Error(ErrorCode::kInvalidDataset,
                    At(source, table.line_numbers[r]) +
                        "missing value in column '" + name + "'");
      }
      missing = true;
      break;
    }
    if (!missing) kept_rows.push_back(r);
  }
  if (kept_rows.empty()) {
    throw Error(ErrorCode::kInvalidDataset, source + ": no usable rows");
  }

  std::vector<AttributeSpec> attributes;
  std::vector<std::vector<double>> columns;
  for (const auto& [name, col] : used) {
    const Role role = roles.at(name);
    std::vector<double> cells;
    cells.reserve(kept_rows.size());
    if (role == Role::kOutcome || numeric.count(name)) {
      for (size_t r : kept_rows) {
        double v = 0.0;
        if (!ParseDouble(table.rows[r][col], v)) {
          throw Error(ErrorCode::kInvalidDataset,
                      At(source, table.line_numbers[r]) + "column '" + name +
                          "': '" + table.rows[r][col] + "' is not a number");
        }
        cells.push_back(v);
      }
      if (role == Role::kOutcome) {
        const auto [lo, hi] = std::minmax_element(cells.begin(), cells.end());
        attributes.push_back({name, role, NumericDomain{*lo, *hi}});
        columns.push_back(std::move(cells));
        continue;
      }
      const std::vector<double> edges = BinEdges(cells, decl.bins);
      std::vector<std::string> labels;
      if (edges.size() == 1) {
        const std::string e = NumberText(edges[0], "%.10g");
        labels.push_back("[" + e + ", " + e + "]");
      }
      for (size_t b = 0; b + 1 < edges.size(); ++b) {
        const bool last = b + 2 == edges.size();
        labels.push_back("[" + NumberText(edges[b], "%.10g") + ", " +
                         NumberText(edges[b + 1], "%.10g") +
                         (last ? "]" : ")"));
      }
      for (double& v : cells) {
        const auto first = edges.begin() + 1;
        const auto last = edges.size() > 1 ? edges.end() - 1 : first;
        v = static_cast<double>(std::upper_bound(first, last, v) - first);
      }
      attributes.push_back({name, role, CategoricalDomain{std::move(labels)}});
      columns.push_back(std::move(cells));
      continue;
    }
    std::set<std::string> distinct;
    for (size_t r : kept_rows) distinct.insert(std::string(Trim(table.rows[r][col])));
    std::vector<std::string> labels(distinct.begin(), distinct.end());
    std::unordered_map<std::string, double> code;
    for (size_t i = 0; i < labels.size(); ++i) {
      code.emplace(labels[i], static_cast<double>(i));
    }
    for (size_t r : kept_rows) {
      cells.push_back(code.at(std::string(Trim(table.rows[r][col]))));
    }
    attributes.push_back({name, role, CategoricalDomain{std::move(labels)}});
    columns.push_back(std::move(cells));
  }

  Schema schema(std::move(attributes));
  Pattern prot = ParsePattern(protected_pattern, schema);
  return Dataset(std::move(schema), std::move(columns), std::move(prot));
}

void WriteDatasetCsv(std::ostream& out, const Dataset& dataset) {
  const Schema& schema = dataset.schema();
  std::vector<std::string> fields;
  for (const AttributeSpec& a : schema.attributes()) fields.push_back(a.name);
  WriteCsvRow(out, fields);
  for (size_t r = 0; r < dataset.num_rows(); ++r) {
    fields.clear();
    for (size_t a = 0; a < schema.size(); ++a) {
      const double v = dataset.cell(r, a);
      fields.push_back(schema.attribute(a).is_categorical()
                           ? schema.ValueText(a, v)
                           : NumberText(v, "%.17g"));
    }
    WriteCsvRow(out, fields);
  }
}

Pattern ParsePattern(std::string_view text, const Schema& schema) {
  std::vector<Predicate> predicates;
  while (true) {
    const size_t semi = text.find(';');
    const std::string_view piece = Trim(text.substr(0, semi));
    if (!piece.empty()) {
      size_t pos = std::string_view::npos;
      size_t len = 0;
      for (size_t i = 0; i < piece.size(); ++i) {
        const std::string_view two = piece.substr(i, 2);
        if (two == "!=" || two == "<=" || two == ">=") {
          pos = i;
          len = 2;
          break;
        }
        if (piece[i] == '=' || piece[i] == '<' || piece[i] == '>') {
          pos = i;
          len = 1;
          break;
        }
      }
      if (pos == std::string_view::npos) {
        throw Error(ErrorCode::kInvalidPattern,
                    "no operator in '" + std::string(piece) + "'");
      }
      const std::string_view attribute = Trim(piece.substr(0, pos));
      const std::string_view value = Trim(piece.substr(pos + len));
      if (attribute.empty() || value.empty()) {
        throw Error(ErrorCode::kInvalidPattern,
                    "incomplete predicate '" + std::string(piece) + "'");
      }
      predicates.push_back(MakePredicate(
          schema, attribute, *ParseOp(piece.substr(pos, len)), value));
    } else if (semi != std::string_view::npos) {
      throw Error(ErrorCode::kInvalidPattern, "empty predicate");
    }
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return Pattern(std::move(predicates));
}

std::string PatternText(const Pattern& pattern, const Schema& schema) {
  return pattern.empty() ? std::string() : FormatPattern(pattern, schema, "; ");
}

CausalDag ParseDot(std::istream& in, const std::string& source) {
  CausalDag dag;
  std::string raw;
  size_t line = 0;
  auto name = [&](std::string_view s) {
    s = Trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
      s = s.substr(1, s.size() - 2);
    }
    if (s.empty() || s.find_first_of("\";{}[]") != std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  At(source, line) + "bad node name '" + std::string(s) + "'");
    }
    return std::string(s);
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    s = Trim(s.substr(0, s.find('#')));
    if (s.empty() || s == "}") continue;
    if (s.starts_with("digraph") && s.ends_with("{")) continue;
    if (s.back() == ';') s.remove_suffix(1);
    const size_t arrow = s.find("->");
    if (arrow == std::string_view::npos ||
        s.find("->", arrow + 2) != std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  At(source, line) + "expected 'A -> B;'");
    }
    dag.AddEdge(name(s.substr(0, arrow)), name(s.substr(arrow + 2)));
  }
  return dag;
}

CausalDag ReadDotFile(const std::filesystem::path& path) {
  std::istringstream in(ReadAll(path, ErrorCode::kParseError));
  return ParseDot(in, path.string());
}

std::string WriteDot(const CausalDag& dag) {
  std::string out = "digraph G {\n";
  for (const auto& [from, to] : dag.edges) {
    out += "  " + from + " -> " + to + ";\n";
  }
  out += "}\n";
  return out;
}

RunConfig ParseRunConfig(std::istream& in, const std::filesystem::path& base_dir,
                         const std::string& source) {
  RunConfig config;
  config.mining.jobs = 0;
  std::map<std::string, std::pair<std::string, size_t>> values;
  std::string raw;
  size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    s = Trim(s.substr(0, s.find('#')));
    if (s.empty()) continue;
    const size_t eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  At(source, line) + "expected 'key = value'");
    }
    const std::string key(Trim(s.substr(0, eq)));
    const std::string value(Trim(s.substr(eq + 1)));
    if (!values.emplace(key, std::make_pair(value, line)).second) {
      throw Error(ErrorCode::kInvalidConfig,
                  At(source, line) + "duplicate key '" + key + "'");
    }
  }

  auto fail = [&](const std::string& key, const std::string& message) {
    throw Error(ErrorCode::kInvalidConfig,
                At(source, values.at(key).second) + key + ": " + message);
  };
  std::set<std::string> consumed;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = values.find(key);
    if (it == values.end()) return nullptr;
    consumed.insert(key);
    return &it->second.first;
  };
  auto required = [&](const std::string& key) -> const std::string& {
    const std::string* v = get(key);
    if (v == nullptr) {
      throw Error(ErrorCode::kInvalidConfig,
                  source + ": missing required key '" + key + "'");
    }
    return *v;
  };
  auto number = [&](const std::string& key, double& out) {
    if (const std::string* v = get(key)) {
      if (!ParseDouble(*v, out)) fail(key, "'" + *v + "' is not a number");
    }
  };
  auto count = [&](const std::string& key, size_t& out) {
    if (const std::string* v = get(key)) {
      if (!ParseSize(*v, out)) fail(key, "'" + *v + "' is not a count");
    }
  };
  auto flag = [&](const std::string& key, bool& out) {
    if (const std::string* v = get(key)) {
      if (*v == "true") {
        out = true;
      } else if (*v == "false") {
        out = false;
      } else {
        fail(key, "expected true or false");
      }
    }
  };
  auto list = [&](const std::string& key) {
    std::vector<std::string> out;
    const std::string* v = get(key);
    if (v == nullptr) return out;
    std::string_view rest = *v;
    while (true) {
      const size_t comma = rest.find(',');
      const std::string_view item = Trim(rest.substr(0, comma));
      if (!item.empty()) out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  };
  auto path = [&](const std::string& key, bool need) {
    const std::string* v = need ? &required(key) : get(key);
    if (v == nullptr || v->empty()) return std::filesystem::path();
    std::filesystem::path p(*v);
    return p.is_absolute() ? p : base_dir / p;
  };

  config.dataset = path("dataset", true);
  config.dag = path("dag", true);
  config.output = path("output", false);
  config.markdown = path("markdown", false);

  SchemaDeclaration& schema = config.schema;
  schema.outcome = required("outcome");
  schema.immutable = list("immutable");
  schema.mutable_attributes = list("mutable");
  schema.numeric = list("numeric");
  if (schema.mutable_attributes.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                source + ": missing required key 'mutable'");
  }
  count("bins", schema.bins);
  if (const std::string* v = get("missing")) {
    if (*v == "reject") {
      schema.missing = MissingPolicy::kReject;
    } else if (*v == "drop") {
      schema.missing = MissingPolicy::kDrop;
    } else {
      fail("missing", "expected reject or drop");
    }
  }
  config.protected_pattern = required("protected");

  SelectionConfig& sel = config.selection;
  if (const std::string* v = get("fairness")) {
    const auto variant = ParseFairnessVariant(*v);
    if (!variant) fail("fairness", "unknown variant '" + *v + "'");
    sel.fairness.variant = *variant;
  }
  number("epsilon", sel.fairness.epsilon);
  number("tau", sel.fairness.tau);
  if (const std::string* v = get("coverage")) {
    const auto variant = ParseCoverageVariant(*v);
    if (!variant) fail("coverage", "unknown variant '" + *v + "'");
    sel.coverage.variant = *variant;
  }
  number("theta", sel.coverage.theta);
  number("theta_p", sel.coverage.theta_p);
  number("lambda1", sel.lambda1);
  number("lambda2", sel.lambda2);
  number("stop_threshold", sel.stop_threshold);
  count("max_rules", sel.max_rules);
  number("w_cov", sel.weights.coverage);
  number("w_ben", sel.weights.benefit);
  number("w_util", sel.weights.utility);
  if (const std::string* v = get("expu_denominator")) {
    const auto d = ParseDenominator(*v);
    if (!d) fail("expu_denominator", "expected covered or total");
    sel.denominator = *d;
  }

  MiningOptions& mining = config.mining;
  number("apriori_support", mining.apriori_support);
  count("max_grouping_len", mining.max_grouping_len);
  count("max_intervention_len", mining.intervention.max_len);
  number("alpha", mining.intervention.alpha);
  count("min_group_size", mining.intervention.cate.min_group_size);
  flag("significance_gate", mining.intervention.significance_gate);
  flag("exhaustive_interventions", mining.intervention.exhaustive);
  count("jobs", mining.jobs);

  for (const auto& [key, entry] : values) {
    if (!consumed.count(key)) {
      throw Error(ErrorCode::kInvalidConfig,
                  At(source, entry.second) + "unknown key '" + key + "'");
    }
  }

  auto check = [&](bool ok, const std::string& key, const char* message) {
    if (ok) return;
    if (values.count(key)) fail(key, message);
    throw Error(ErrorCode::kInvalidConfig, source + ": " + key + ": " + message);
  };
  check(mining.apriori_support > 0.0 && mining.apriori_support <= 1.0,
        "apriori_support", "must lie in (0, 1]");
  check(mining.max_grouping_len >= 1, "max_grouping_len", "must be positive");
  check(mining.intervention.max_len >= 1, "max_intervention_len",
        "must be positive");
  check(mining.intervention.alpha > 0.0 && mining.intervention.alpha <= 1.0,
        "alpha", "must lie in (0, 1]");
  check(mining.intervention.cate.min_group_size >= 1, "min_group_size",
        "must be positive");
  check(schema.bins >= 1, "bins", "must be positive");
  check(!sel.fairness.is_sp() || sel.fairness.epsilon > 0.0, "epsilon",
        "must be positive in SP fairness modes");
  check(!sel.fairness.is_bgl() || sel.fairness.tau >= 0.0, "tau",
        "must be non-negative");
  try {
    sel.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, source + ": " + e.what());
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::istringstream in(ReadAll(path, ErrorCode::kInvalidConfig));
  return ParseRunConfig(in, path.parent_path(), path.string());
}

LoadedInputs LoadInputs(const RunConfig& config) {
  const CsvTable table = ReadCsvFile(config.dataset);
  Dataset dataset = BuildDataset(table, config.schema, config.protected_pattern,
                                 config.dataset.string());
  CausalDag dag = ReadDotFile(config.dag);
  ValidateDag(dag, dataset.schema());
  return LoadedInputs{std::move(dataset), std::move(dag)};
}

std::string RenderReport(const RunConfig& config, const Dataset& dataset,
                         const PipelineResult& result) {
  const Schema& schema = dataset.schema();
  const SelectionConfig& sel = config.selection;
  const SelectionResult& selection = result.selection;
  const MiningOptions& mining = config.mining;

  Json report;
  report["schema_version"] = kReportSchemaVersion;
  report["status"] = selection.feasible() ? "ok" : "infeasible";
  report["config"] = {
      {"protected", PatternText(dataset.protected_pattern(), schema)},
      {"fairness", std::string(FairnessVariantName(sel.fairness.variant))},
      {"epsilon", sel.fairness.epsilon},
      {"tau", sel.fairness.tau},
      {"coverage", std::string(CoverageVariantName(sel.coverage.variant))},
      {"theta", sel.coverage.theta},
      {"theta_p", sel.coverage.theta_p},
      {"lambda1", sel.lambda1},
      {"lambda2", sel.lambda2},
      {"stop_threshold", sel.stop_threshold},
      {"max_rules", sel.max_rules},
      {"w_cov", sel.weights.coverage},
      {"w_ben", sel.weights.benefit},
      {"w_util", sel.weights.utility},
      {"expu_denominator", std::string(DenominatorName(sel.denominator))},
      {"apriori_support", mining.apriori_support},
      {"max_grouping_len", mining.max_grouping_len},
      {"max_intervention_len", mining.intervention.max_len},
      {"alpha", mining.intervention.alpha},
      {"min_group_size", mining.intervention.cate.min_group_size},
      {"significance_gate", mining.intervention.significance_gate},
      {"exhaustive_interventions", mining.intervention.exhaustive}};
  report["dataset"] = {{"rows", dataset.num_rows()},
                       {"protected_rows", dataset.num_protected()},
                       {"outcome", schema.outcome_name()}};
  report["candidates"] = result.candidates.size();
  report["objective"] = selection.objective;
  report["metrics"] = MetricsJson(selection.metrics);

  Json violations = Json::array();
  for (const Violation& v : selection.violations) {
    violations.push_back({{"clause", v.clause},
                          {"measured", v.measured},
                          {"bound", v.bound},
                          {"detail", v.detail}});
  }
  report["violations"] = std::move(violations);

  Json rules = Json::array();
  for (const PrescriptionRule& r : selection.rules) {
    rules.push_back({{"grouping", PatternJson(r.grouping, schema)},
                     {"intervention", PatternJson(r.intervention, schema)},
                     {"utility", r.utility},
                     {"utility_protected", r.utility_p},
                     {"utility_nonprotected", r.utility_np},
                     {"p_value", r.p_value},
                     {"benefit", r.benefit},
                     {"coverage", r.coverage.count},
                     {"coverage_protected", r.coverage.protected_count},
                     {"text", RenderRule(r, schema)}});
  }
  report["rules"] = std::move(rules);

  Json trace = Json::array();
  for (const TraceStep& t : selection.trace) {
    trace.push_back({{"iteration", t.iteration},
                     {"candidate", t.candidate},
                     {"score", t.score},
                     {"coverage_term", t.coverage_term},
                     {"benefit_term", t.benefit_term},
                     {"utility_term", t.utility_term},
                     {"exp_utility", t.exp_utility},
                     {"coverage_met", t.coverage_met}});
  }
  report["trace"] = std::move(trace);
  return report.dump(2) + "\n";
}

ParsedReport ParseReport(std::string_view text, const Schema& schema) {
  Json report;
  try {
    report = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("report is not valid JSON: ") + e.what());
  }
  try {
    const int version = report.at("schema_version").get<int>();
    if (version != kReportSchemaVersion) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "unsupported schema_version " + std::to_string(version));
    }
    ParsedReport out;
    out.status = report.at("status").get<std::string>();
    const Json& m = report.at("metrics");
    out.metrics.size = m.at("size").get<size_t>();
    out.metrics.coverage_frac = m.at("coverage").get<double>();
    out.metrics.coverage_p_frac = m.at("coverage_protected").get<double>();
    out.metrics.exp_utility = m.at("exp_utility").get<double>();
    out.metrics.exp_utility_p = m.at("exp_utility_protected").get<double>();
    out.metrics.exp_utility_np = m.at("exp_utility_nonprotected").get<double>();
    out.metrics.unfairness = m.at("unfairness").get<double>();
    for (const Json& r : report.at("rules")) {
      ReportedRule rule;
      rule.grouping = PatternFromJson(r.at("grouping"), schema);
      rule.intervention = PatternFromJson(r.at("intervention"), schema);
      rule.utility = r.at("utility").get<double>();
      rule.utility_p = r.at("utility_protected").get<double>();
      rule.utility_np = r.at("utility_nonprotected").get<double>();
      rule.coverage = r.at("coverage").get<size_t>();
      out.rules.push_back(std::move(rule));
    }
    return out;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("malformed report: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaMismatch) throw;
    throw Error(ErrorCode::kSchemaMismatch, e.what());
  }
}

ReportCheck CheckReport(const ParsedReport& report, const LoadedInputs& inputs,
                        const RunConfig& config) {
  const Dataset& dataset = inputs.dataset;
  ReportCheck check;
  std::vector<PrescriptionRule> rules;
  for (size_t i = 0; i < report.rules.size(); ++i) {
    const ReportedRule& reported = report.rules[i];
    PrescriptionRule rule;
    rule.grouping = reported.grouping;
    rule.intervention = reported.intervention;
    rule.coverage = Coverage(rule.grouping, dataset);
    const RuleUtilities u =
        ComputeRuleUtilities(dataset, inputs.dag, rule.grouping,
                             rule.intervention, config.mining.intervention.cate);
    rule.utility = u.utility;
    rule.utility_p = u.utility_p;
    rule.utility_np = u.utility_np;
    rule.p_value = u.p_value;
    const std::string tag = "rule " + std::to_string(i) + ": ";
    if (rule.coverage.count != reported.coverage) {
      check.mismatches.push_back(tag + "coverage " +
                                 std::to_string(rule.coverage.count) +
                                 " != reported " +
                                 std::to_string(reported.coverage));
    }
    const std::pair<const char*, std::pair<double, double>> fields[] = {
        {"utility", {rule.utility, reported.utility}},
        {"utility_protected", {rule.utility_p, reported.utility_p}},
        {"utility_nonprotected", {rule.utility_np, reported.utility_np}}};
    for (const auto& [name, pair] : fields) {
      if (!Close(pair.first, pair.second)) {
        check.mismatches.push_back(tag + name + " " +
                                   NumberText(pair.first, "%.17g") +
                                   " != reported " +
                                   NumberText(pair.second, "%.17g"));
      }
    }
    rules.push_back(std::move(rule));
  }
  check.recomputed =
      ComputeMetrics(rules, dataset, config.selection.denominator);
  const RulesetMetrics& a = check.recomputed;
  const RulesetMetrics& b = report.metrics;
  if (a.size != b.size) check.mismatches.push_back("metrics: size");
  const std::pair<const char*, std::pair<double, double>> metrics[] = {
      {"coverage", {a.coverage_frac, b.coverage_frac}},
      {"coverage_protected", {a.coverage_p_frac, b.coverage_p_frac}},
      {"exp_utility", {a.exp_utility, b.exp_utility}},
      {"exp_utility_protected", {a.exp_utility_p, b.exp_utility_p}},
      {"exp_utility_nonprotected", {a.exp_utility_np, b.exp_utility_np}},
      {"unfairness", {a.unfairness, b.unfairness}}};
  for (const auto& [name, pair] : metrics) {
    if (!Close(pair.first, pair.second)) {
      check.mismatches.push_back(std::string("metrics: ") + name + " " +
                                 NumberText(pair.first, "%.17g") +
                                 " != reported " +
                                 NumberText(pair.second, "%.17g"));
    }
  }
  return check;
}

}  // namespace faircap::io
