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

#include "faircap/causal.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

#include <boost/math/distributions/students_t.hpp>

#include "faircap/error.h"

namespace faircap {

void CausalDag::AddEdge(const std::string& from, const std::string& to) {
  nodes.insert(from);
  nodes.insert(to);
  edges.emplace(from, to);
}

std::set<std::string> CausalDag::Parents(const std::string& node) const {
  std::set<std::string> out;
  for (const auto& [from, to] : edges) {
    if (to == node) out.insert(from);
  }
  return out;
}

std::set<std::string> CausalDag::Children(const std::string& node) const {
  std::set<std::string> out;
  for (const auto& [from, to] : edges) {
    if (from == node) out.insert(to);
  }
  return out;
}

std::set<std::string> CausalDag::Descendants(const std::string& node) const {
  std::set<std::string> seen;
  std::deque<std::string> queue{node};
  while (!queue.empty()) {
    const std::string current = queue.front();
    queue.pop_front();
    for (const std::string& child : Children(current)) {
      if (seen.insert(child).second) queue.push_back(child);
    }
  }
  return seen;
}

std::vector<std::string> ValidateDag(const CausalDag& dag,
                                     const Schema& schema) {
  for (const std::string& node : dag.nodes) {
    if (!schema.Find(node)) {
      throw Error(ErrorCode::kUnknownNode,
                  "DAG node '" + node + "' is not in the schema");
    }
  }
  for (const auto& [from, to] : dag.edges) {
    if (!dag.nodes.count(from) || !dag.nodes.count(to)) {
      throw Error(ErrorCode::kUnknownNode,
                  "edge " + from + " -> " + to + " references a missing node");
    }
    if (from == to) {
      throw Error(ErrorCode::kCyclicGraph, "self-loop " + from + " -> " + to);
    }
  }

  std::map<std::string, std::vector<std::string>> children;
  std::map<std::string, size_t> in_degree;
  for (const std::string& node : dag.nodes) in_degree[node] = 0;
  for (const auto& [from, to] : dag.edges) {
    children[from].push_back(to);
    ++in_degree[to];
  }

  std::set<std::string> ready;
  for (const auto& [node, degree] : in_degree) {
    if (degree == 0) ready.insert(node);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string node = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(node);
    for (const std::string& child : children[node]) {
      if (--in_degree[child] == 0) ready.insert(child);
    }
  }
  if (order.size() == dag.nodes.size()) return order;

  // Some cycle remains among nodes with positive in-degree; walk
  // predecessors until a node repeats.
  std::map<std::string, std::string> some_parent;
  for (const auto& [from, to] : dag.edges) {
    if (in_degree[from] > 0 && in_degree[to] > 0 && !some_parent.count(to)) {
      some_parent[to] = from;
    }
  }
  std::string node = some_parent.begin()->first;
  std::vector<std::string> path;
  std::set<std::string> on_path;
  while (on_path.insert(node).second) {
    path.push_back(node);
    node = some_parent[node];
  }
  auto start = std::find(path.begin(), path.end(), node);
  std::vector<std::string> cycle(start, path.end());
  std::reverse(cycle.begin(), cycle.end());
  std::string text;
  for (const std::string& n : cycle) text += n + " -> ";
  text += cycle.front();
  throw Error(ErrorCode::kCyclicGraph, "cycle " + text);
}

std::set<std::string> CausallyRelevantAttributes(const CausalDag& dag,
                                                 const std::string& outcome) {
  std::set<std::string> ancestors;
  std::deque<std::string> queue{outcome};
  while (!queue.empty()) {
    const std::string current = queue.front();
    queue.pop_front();
    for (const std::string& parent : dag.Parents(current)) {
      if (parent != outcome && ancestors.insert(parent).second) {
        queue.push_back(parent);
      }
    }
  }
  return ancestors;
}

std::set<std::string> AdjustmentSet(const CausalDag& dag,
                                    const std::set<std::string>& treatments,
                                    const std::string& outcome) {
  if (treatments.count(outcome)) {
    throw Error(ErrorCode::kOutcomeInTreatment,
                "outcome '" + outcome + "' cannot be a treatment");
  }
  std::set<std::string> parents;
  std::set<std::string> descendants;
  for (const std::string& t : treatments) {
    if (!dag.nodes.count(t)) {
      throw Error(ErrorCode::kUnknownNode,
                  "treatment '" + t + "' is not a DAG node");
    }
    parents.merge(dag.Parents(t));
    descendants.merge(dag.Descendants(t));
  }
  std::set<std::string> out;
  for (const std::string& p : parents) {
    if (!treatments.count(p) && !descendants.count(p) && p != outcome) {
      out.insert(p);
    }
  }
  return out;
}

CausalDag GenerateSimplifiedDag(SimplifiedDagKind kind, const Schema& schema) {
  CausalDag dag;
  const std::string& outcome = schema.outcome_name();
  dag.nodes.insert(outcome);
  const auto immutables = schema.IndicesWithRole(Role::kImmutable);
  const auto mutables = schema.IndicesWithRole(Role::kMutable);
  for (size_t i : immutables) dag.nodes.insert(schema.attribute(i).name);
  for (size_t m : mutables) dag.nodes.insert(schema.attribute(m).name);

  switch (kind) {
    case SimplifiedDagKind::kOneLayerIndep:
      for (size_t i : immutables) dag.AddEdge(schema.attribute(i).name, outcome);
      for (size_t m : mutables) dag.AddEdge(schema.attribute(m).name, outcome);
      break;
    case SimplifiedDagKind::kTwoLayer:
      for (size_t i : immutables) dag.AddEdge(schema.attribute(i).name, outcome);
      [[fallthrough]];
    case SimplifiedDagKind::kTwoLayerMutable:
      for (size_t i : immutables) {
        for (size_t m : mutables) {
          dag.AddEdge(schema.attribute(i).name, schema.attribute(m).name);
        }
      }
      for (size_t m : mutables) dag.AddEdge(schema.attribute(m).name, outcome);
      break;
  }
  return dag;
}

// Normal equations of [intercept, confounder dummies] over a row subset,
// reduced by a column-order-preserving Cholesky: a column is kept only when
// it adds rank to the columns kept before it, so within each one-hot block
// the last collinear level is the one dropped.
struct BaseFit {
  std::vector<size_t> columns;   // adjustment attributes
  std::vector<size_t> offsets;   // first design column of each attribute
  std::vector<bool> categorical;
  size_t width = 0;              // design columns including the intercept
  std::vector<int> kept_slot;    // design column -> row of `chol`, or -1
  std::vector<std::vector<double>> chol;  // lower-triangular rows
  std::vector<double> z;         // chol^{-1} X'y
  double z_norm2 = 0.0;
  double yy = 0.0;
};

namespace {

constexpr double kRankTolerance = 1e-9;

// Design-column entries of one row: (column, value) pairs.
template <typename Fn>
void ForEachEntry(const BaseFit& fit, const Dataset& dataset, uint32_t row,
                  Fn&& fn) {
  fn(size_t{0}, 1.0);
  for (size_t k = 0; k < fit.columns.size(); ++k) {
    const double cell = dataset.cell(row, fit.columns[k]);
    if (fit.categorical[k]) {
      fn(fit.offsets[k] + static_cast<size_t>(cell), 1.0);
    } else {
      fn(fit.offsets[k], cell);
    }
  }
}

std::vector<double> ForwardSolve(const std::vector<std::vector<double>>& chol,
                                 const std::vector<double>& rhs) {
  std::vector<double> x(rhs.size());
  for (size_t i = 0; i < rhs.size(); ++i) {
    double s = rhs[i];
    for (size_t j = 0; j < i; ++j) s -= chol[i][j] * x[j];
    x[i] = s / chol[i][i];
  }
  return x;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double TwoSidedPValue(double estimate, double std_err, double df) {
  if (!(std_err > 0.0) || !std::isfinite(std_err)) {
    return std::abs(estimate) <= 1e-12 ? 1.0 : 0.0;
  }
  const double t = std::abs(estimate / std_err);
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

SubgroupEstimator::SubgroupEstimator(const Dataset& dataset,
                                     std::vector<uint32_t> rows,
                                     CateOptions options)
    : dataset_(&dataset), rows_(std::move(rows)), options_(options) {
  const auto y = dataset.outcome();
  double sum = 0.0;
  for (uint32_t r : rows_) sum += y[r];
  outcome_mean_ = rows_.empty() ? 0.0 : sum / static_cast<double>(rows_.size());
}

SubgroupEstimator::~SubgroupEstimator() = default;
SubgroupEstimator::SubgroupEstimator(SubgroupEstimator&&) noexcept = default;
SubgroupEstimator& SubgroupEstimator::operator=(SubgroupEstimator&&) noexcept =
    default;

const BaseFit& SubgroupEstimator::Base(const std::vector<size_t>& columns) {
  auto it = cache_.find(columns);
  if (it != cache_.end()) return *it->second;

  auto fit = std::make_unique<BaseFit>();
  const Schema& schema = dataset_->schema();
  fit->columns = columns;
  size_t width = 1;
  for (size_t c : columns) {
    const AttributeSpec& spec = schema.attribute(c);
    fit->offsets.push_back(width);
    fit->categorical.push_back(spec.is_categorical());
    width += spec.is_categorical() ? spec.labels().size() : 1;
  }
  fit->width = width;

  std::vector<double> gram(width * width, 0.0);
  std::vector<double> xty(width, 0.0);
  const auto y = dataset_->outcome();
  std::vector<std::pair<size_t, double>> entries;
  for (uint32_t r : rows_) {
    entries.clear();
    ForEachEntry(*fit, *dataset_, r,
                 [&](size_t col, double v) { entries.emplace_back(col, v); });
    const double yc = y[r] - outcome_mean_;
    fit->yy += yc * yc;
    for (const auto& [ci, vi] : entries) {
      xty[ci] += vi * yc;
      for (const auto& [cj, vj] : entries) gram[ci * width + cj] += vi * vj;
    }
  }

  fit->kept_slot.assign(width, -1);
  std::vector<size_t> kept;
  for (size_t j = 0; j < width; ++j) {
    const double diag = gram[j * width + j];
    if (!(diag > 0.0)) continue;
    std::vector<double> g(kept.size());
    for (size_t s = 0; s < kept.size(); ++s) g[s] = gram[kept[s] * width + j];
    std::vector<double> l = ForwardSolve(fit->chol, g);
    const double pivot = diag - Dot(l, l);
    if (pivot <= kRankTolerance * diag) continue;
    const double root = std::sqrt(pivot);
    const double zj = (xty[j] - Dot(l, fit->z)) / root;
    l.push_back(root);
    fit->chol.push_back(std::move(l));
    fit->z.push_back(zj);
    fit->kept_slot[j] = static_cast<int>(kept.size());
    kept.push_back(j);
  }
  fit->z_norm2 = Dot(fit->z, fit->z);

  auto [inserted, ok] = cache_.emplace(columns, std::move(fit));
  return *inserted->second;
}

CateEstimate SubgroupEstimator::Estimate(
    const Pattern& intervention, const std::set<std::string>& adjustment_set) {
  const Schema& schema = dataset_->schema();
  std::vector<size_t> columns;
  for (const std::string& name : adjustment_set) {
    columns.push_back(schema.IndexOf(name));
  }
  std::sort(columns.begin(), columns.end());

  struct Resolved {
    size_t column;
    Predicate predicate;
  };
  std::vector<Resolved> treatment;
  for (const Predicate& p : intervention.predicates()) {
    treatment.push_back({schema.IndexOf(p.attribute), p});
  }

  CateEstimate estimate;
  estimate.adjustment_set = adjustment_set;
  std::vector<uint32_t> treated;
  for (uint32_t r : rows_) {
    bool hit = true;
    for (const Resolved& t : treatment) {
      if (!CompareCell(t.predicate.op, dataset_->cell(r, t.column),
                       t.predicate.value)) {
        hit = false;
        break;
      }
    }
    if (hit) treated.push_back(r);
  }
  estimate.n_treated = treated.size();
  estimate.n_control = rows_.size() - treated.size();
  if (estimate.n_treated < options_.min_group_size ||
      estimate.n_control < options_.min_group_size ||
      estimate.n_treated == 0 || estimate.n_control == 0) {
    throw Error(ErrorCode::kPositivityViolation,
                "treated " + std::to_string(estimate.n_treated) +
                    ", control " + std::to_string(estimate.n_control) +
                    ", minimum " + std::to_string(options_.min_group_size));
  }

  const BaseFit& base = Base(columns);
  const auto y = dataset_->outcome();
  std::vector<double> g_full(base.width, 0.0);
  double yt = 0.0;
  for (uint32_t r : treated) {
    ForEachEntry(base, *dataset_, r,
                 [&](size_t col, double v) { g_full[col] += v; });
    yt += y[r] - outcome_mean_;
  }
  std::vector<double> g(base.chol.size());
  for (size_t j = 0; j < base.width; ++j) {
    if (base.kept_slot[j] >= 0) g[base.kept_slot[j]] = g_full[j];
  }
  const std::vector<double> l = ForwardSolve(base.chol, g);
  const double n_t = static_cast<double>(treated.size());
  const double pivot = n_t - Dot(l, l);
  if (pivot <= kRankTolerance * n_t) {
    throw Error(ErrorCode::kSingularDesign,
                "treatment indicator is collinear with the adjustment set");
  }
  const double df =
      static_cast<double>(rows_.size()) -
      static_cast<double>(base.chol.size() + 1);
  if (df < 1.0) {
    throw Error(ErrorCode::kSingularDesign,
                "no residual degrees of freedom");
  }
  const double root = std::sqrt(pivot);
  const double z_t = (yt - Dot(l, base.z)) / root;
  const double rss = std::max(0.0, base.yy - base.z_norm2 - z_t * z_t);
  const double sigma2 = rss / df;

  estimate.point = z_t / root;
  estimate.std_err = std::sqrt(sigma2 / pivot);
  estimate.p_value = TwoSidedPValue(estimate.point, estimate.std_err, df);
  return estimate;
}

CateEstimate EstimateCate(const Dataset& dataset, const Pattern& group,
                          const Pattern& intervention, const CausalDag& dag,
                          const CateOptions& options) {
  const auto attrs = intervention.Attributes();
  const std::set<std::string> treatments(attrs.begin(), attrs.end());
  const auto adjustment =
      AdjustmentSet(dag, treatments, dataset.schema().outcome_name());
  SubgroupEstimator estimator(dataset, Coverage(group, dataset).row_ids,
                              options);
  return estimator.Estimate(intervention, adjustment);
}

}  // namespace faircap
