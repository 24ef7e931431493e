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

#include "faircap/grouping_miner.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

#include "faircap/error.h"

namespace faircap {
namespace {

using Bitset = std::vector<uint64_t>;

struct Item {
  size_t attribute;  // schema index
  size_t code;

  auto operator<=>(const Item&) const = default;
};

struct Itemset {
  std::vector<Item> items;
  Bitset rows;
  size_t count = 0;
};

size_t PopCount(const Bitset& bits) {
  size_t total = 0;
  for (uint64_t word : bits) total += std::popcount(word);
  return total;
}

Bitset And(const Bitset& a, const Bitset& b) {
  Bitset out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

}  // namespace

size_t MinSupportCount(double support, size_t num_rows) {
  const double needed = support * static_cast<double>(num_rows);
  return static_cast<size_t>(std::ceil(needed - 1e-9));
}

std::vector<GroupingCandidate> MineGroupingPatterns(
    const Dataset& dataset, const std::set<std::string>& relevant_attributes,
    double apriori_support, size_t max_len) {
  if (!(apriori_support > 0.0 && apriori_support <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "apriori support must be in (0, 1]");
  }
  const Schema& schema = dataset.schema();
  const size_t n = dataset.num_rows();
  const size_t words = (n + 63) / 64;
  const size_t min_count = std::max<size_t>(1, MinSupportCount(apriori_support, n));

  std::vector<size_t> attributes;
  for (const std::string& name : relevant_attributes) {
    const size_t index = schema.IndexOf(name);
    if (schema.attribute(index).is_categorical()) attributes.push_back(index);
  }
  std::sort(attributes.begin(), attributes.end());

  // Level 1: one bitset per (attribute, value).
  std::vector<Itemset> level;
  std::map<Item, Bitset> item_rows;
  for (size_t a : attributes) {
    const size_t domain = schema.attribute(a).labels().size();
    std::vector<Bitset> bits(domain, Bitset(words, 0));
    const auto column = dataset.column(a);
    for (size_t r = 0; r < n; ++r) {
      const auto code = static_cast<size_t>(column[r]);
      bits[code][r / 64] |= uint64_t{1} << (r % 64);
    }
    for (size_t code = 0; code < domain; ++code) {
      const size_t count = PopCount(bits[code]);
      if (count < min_count) continue;
      const Item item{a, code};
      item_rows.emplace(item, bits[code]);
      level.push_back({{item}, std::move(bits[code]), count});
    }
  }
  if (level.empty()) {
    throw Error(ErrorCode::kNoPatterns,
                "no single item reaches the apriori support threshold");
  }

  std::vector<Itemset> frequent;
  for (size_t k = 1; !level.empty(); ++k) {
    // Level sets are kept sorted by item list for the join.
    std::sort(level.begin(), level.end(),
              [](const Itemset& x, const Itemset& y) { return x.items < y.items; });
    std::set<std::vector<Item>> known;
    for (const Itemset& s : level) known.insert(s.items);

    std::vector<Itemset> next;
    if (k < max_len) {
      for (size_t i = 0; i < level.size(); ++i) {
        for (size_t j = i + 1; j < level.size(); ++j) {
          const auto& a = level[i].items;
          const auto& b = level[j].items;
          if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;
          if (a.back().attribute == b.back().attribute) continue;
          std::vector<Item> joined = a;
          joined.push_back(b.back());
          // Downward closure: every k-subset must be frequent.
          bool closed = true;
          for (size_t drop = 0; drop + 2 < joined.size() && closed; ++drop) {
            std::vector<Item> subset;
            for (size_t m = 0; m < joined.size(); ++m) {
              if (m != drop) subset.push_back(joined[m]);
            }
            closed = known.count(subset) > 0;
          }
          if (!closed) continue;
          Bitset rows = And(level[i].rows, item_rows.at(b.back()));
          const size_t count = PopCount(rows);
          if (count < min_count) continue;
          next.push_back({std::move(joined), std::move(rows), count});
        }
      }
    }
    for (Itemset& s : level) frequent.push_back(std::move(s));
    level = std::move(next);
  }

  std::vector<GroupingCandidate> out;
  out.reserve(frequent.size());
  for (const Itemset& s : frequent) {
    std::vector<Predicate> predicates;
    for (const Item& item : s.items) {
      predicates.push_back({schema.attribute(item.attribute).name, Op::kEq,
                            static_cast<double>(item.code)});
    }
    GroupingCandidate candidate;
    candidate.pattern = Pattern(std::move(predicates));
    candidate.support = static_cast<double>(s.count) / static_cast<double>(n);
    candidate.coverage.row_ids.reserve(s.count);
    for (size_t w = 0; w < words; ++w) {
      uint64_t word = s.rows[w];
      while (word) {
        const int bit = std::countr_zero(word);
        const size_t r = w * 64 + static_cast<size_t>(bit);
        candidate.coverage.row_ids.push_back(static_cast<uint32_t>(r));
        if (dataset.is_protected(r)) ++candidate.coverage.protected_count;
        word &= word - 1;
      }
    }
    candidate.coverage.count = s.count;
    out.push_back(std::move(candidate));
  }
  std::sort(out.begin(), out.end(),
            [](const GroupingCandidate& x, const GroupingCandidate& y) {
              if (x.coverage.count != y.coverage.count) {
                return x.coverage.count > y.coverage.count;
              }
              return x.pattern < y.pattern;
            });
  return out;
}

}  // namespace faircap
