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

#include <random>

#include "faircap/data.h"
#include "faircap/error.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace faircap {
namespace {

using testing::Cat;
using testing::Num;

// The four-row developer survey sample.
Dataset SurveySample() {
  Schema schema({
      Cat("Gender", Role::kImmutable, {"Female", "Male", "Non-binary"}),
      Cat("Ethnicity", Role::kImmutable, {"East Asian", "South Asian", "White"}),
      Num("Age", Role::kImmutable, 18, 70),
      Cat("Role", Role::kMutable,
          {"Back-end developer", "C-suite executive", "Data Scientist",
           "QA developer"}),
      Cat("Education", Role::kMutable, {"Bachelor's degree", "PhD"}),
      Cat("Country", Role::kImmutable, {"China", "India", "US"}),
      Num("Salary", Role::kOutcome, 0, 200000),
  });
  std::vector<std::vector<double>> cols = {
      {1, 2, 1, 0},          // Gender
      {2, 2, 1, 0},          // Ethnicity
      {26, 32, 29, 21},      // Age
      {2, 3, 1, 0},          // Role
      {1, 0, 0, 0},          // Education
      {2, 2, 1, 0},          // Country
      {180000, 83000, 24000, 19000},
  };
  return Dataset(std::move(schema), std::move(cols),
                 Pattern({Predicate{"Country", Op::kNe, 2}}));
}

TEST(PredicateTest, NumericEqualityOnSurveyRows) {
  const Dataset d = SurveySample();
  const Predicate age = MakePredicate(d.schema(), "Age", Op::kEq, "26");
  EXPECT_TRUE(EvaluatePredicate(age, d, 0));
  EXPECT_FALSE(EvaluatePredicate(age, d, 1));
}

TEST(PredicateTest, CellEqualsItself) {
  const Dataset d = SurveySample();
  for (size_t a = 0; a < d.schema().size(); ++a) {
    for (size_t r = 0; r < d.num_rows(); ++r) {
      Predicate p{d.schema().attribute(a).name, Op::kEq, d.cell(r, a)};
      EXPECT_TRUE(EvaluatePredicate(p, d, r));
    }
  }
}

TEST(PredicateTest, AllOperatorsOnNumeric) {
  const Dataset d = SurveySample();
  EXPECT_TRUE(EvaluatePredicate({"Age", Op::kLt, 27}, d, 0));
  EXPECT_TRUE(EvaluatePredicate({"Age", Op::kLe, 26}, d, 0));
  EXPECT_FALSE(EvaluatePredicate({"Age", Op::kGt, 26}, d, 0));
  EXPECT_TRUE(EvaluatePredicate({"Age", Op::kGe, 26}, d, 0));
  EXPECT_TRUE(EvaluatePredicate({"Age", Op::kNe, 25}, d, 0));
}

TEST(PredicateTest, UnknownAttribute) {
  const Dataset d = SurveySample();
  try {
    EvaluatePredicate({"Height", Op::kEq, 1}, d, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownAttribute);
  }
}

TEST(PredicateTest, OrderingOnCategoricalRejected) {
  const Dataset d = SurveySample();
  EXPECT_THROW(MakePredicate(d.schema(), "Country", Op::kLt, "US"), Error);
  EXPECT_THROW(MakePredicate(d.schema(), "Country", Op::kEq, "Mars"), Error);
}

TEST(CoverageTest, CountryUs) {
  const Dataset d = SurveySample();
  const Pattern us({MakePredicate(d.schema(), "Country", Op::kEq, "US")});
  const CoverageSet c = Coverage(us, d);
  EXPECT_EQ(c.row_ids, (std::vector<uint32_t>{0, 1}));
  EXPECT_EQ(c.count, 2u);
  EXPECT_EQ(c.protected_count, 0u);
}

TEST(CoverageTest, EmptyPatternCoversAll) {
  const Dataset d = SurveySample();
  const CoverageSet c = Coverage(Pattern(), d);
  EXPECT_EQ(c.count, d.num_rows());
  EXPECT_EQ(c.protected_count, d.num_protected());
  EXPECT_EQ(d.num_protected(), 2u);
}

TEST(CoverageTest, ContradictoryEqualitiesCoverNothing) {
  // A single pattern may not repeat (attribute, op), so the conjunction
  // A = x AND A = y is the intersection of two coverages.
  const Dataset d = SurveySample();
  const CoverageSet us =
      Coverage(Pattern({MakePredicate(d.schema(), "Country", Op::kEq, "US")}), d);
  const CoverageSet india = Coverage(
      Pattern({MakePredicate(d.schema(), "Country", Op::kEq, "India")}), d);
  std::vector<uint32_t> both;
  std::set_intersection(us.row_ids.begin(), us.row_ids.end(),
                        india.row_ids.begin(), india.row_ids.end(),
                        std::back_inserter(both));
  EXPECT_TRUE(both.empty());
}

TEST(PatternTest, DuplicateAttributeOpRejected) {
  try {
    Pattern({Predicate{"A", Op::kEq, 1}, Predicate{"A", Op::kEq, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidPattern);
  }
  // Same attribute, different operators, is a range.
  EXPECT_NO_THROW(Pattern({Predicate{"A", Op::kGe, 1}, Predicate{"A", Op::kLt, 2}}));
}

TEST(PatternTest, CanonicalOrder) {
  const Pattern a({Predicate{"B", Op::kEq, 2}, Predicate{"A", Op::kEq, 1}});
  const Pattern b({Predicate{"A", Op::kEq, 1}, Predicate{"B", Op::kEq, 2}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.predicates().front().attribute, "A");
}

TEST(PatternTest, Refines) {
  const Pattern a1({Predicate{"A", Op::kEq, 1}});
  const Pattern a1b2({Predicate{"A", Op::kEq, 1}, Predicate{"B", Op::kEq, 2}});
  EXPECT_TRUE(PatternRefines(a1b2, a1));
  EXPECT_FALSE(PatternRefines(a1, a1b2));
  EXPECT_TRUE(PatternRefines(a1, a1));
  EXPECT_TRUE(PatternRefines(a1, Pattern()));
}

TEST(PatternTest, Format) {
  const Dataset d = SurveySample();
  const Pattern p({MakePredicate(d.schema(), "Country", Op::kEq, "US"),
                   MakePredicate(d.schema(), "Age", Op::kGe, "30")});
  EXPECT_EQ(FormatPattern(p, d.schema()), "Age >= 30 AND Country = US");
  EXPECT_EQ(FormatPattern(Pattern(), d.schema()), "(all)");
}

TEST(SchemaTest, Validation) {
  using testing::Cat;
  EXPECT_THROW(Schema({Cat("A", Role::kImmutable, {"x"})}), Error);  // no outcome
  EXPECT_THROW(Schema({Num("O", Role::kOutcome), Num("P", Role::kOutcome)}),
               Error);
  EXPECT_THROW(Schema({Cat("O", Role::kOutcome, {"x"})}), Error);
  EXPECT_THROW(Schema({Cat("A", Role::kImmutable, {"x"}),
                       Cat("A", Role::kMutable, {"x"}), Num("O", Role::kOutcome)}),
               Error);
  EXPECT_THROW(Schema({Cat("A", Role::kImmutable, {"x", "x"}),
                       Num("O", Role::kOutcome)}),
               Error);
  EXPECT_THROW(Schema({Cat("A", Role::kImmutable, {}), Num("O", Role::kOutcome)}),
               Error);
}

TEST(DatasetTest, Validation) {
  auto schema = [] {
    return Schema({Cat("A", Role::kImmutable, {"x", "y"}), Num("O", Role::kOutcome)});
  };
  EXPECT_THROW(Dataset(schema(), {{0, 1}, {1.0}}, Pattern()), Error);  // ragged
  EXPECT_THROW(Dataset(schema(), {{0, 2}, {1, 2}}, Pattern()), Error);  // code
  EXPECT_THROW(Dataset(schema(), {{0, 0.5}, {1, 2}}, Pattern()), Error);
  EXPECT_THROW(Dataset(schema(), {{}, {}}, Pattern()), Error);  // n = 0
  EXPECT_THROW(Dataset(schema(), {{0, 1}, {1, NAN}}, Pattern()), Error);
  EXPECT_NO_THROW(Dataset(schema(), {{0, 1}, {1, 2}}, Pattern()));
}

// Monotonicity and the protected-count cross-check on random patterns.
TEST(CoveragePropertyTest, RefinementShrinksCoverage) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 120;
    Schema schema({Cat("A", Role::kImmutable, {"0", "1", "2"}),
                   Cat("B", Role::kImmutable, {"0", "1"}),
                   Cat("C", Role::kImmutable, {"0", "1", "2", "3"}),
                   Num("O", Role::kOutcome)});
    std::vector<std::vector<double>> cols(4, std::vector<double>(n));
    const size_t card[] = {3, 2, 4};
    for (size_t a = 0; a < 3; ++a) {
      std::uniform_int_distribution<size_t> v(0, card[a] - 1);
      for (double& c : cols[a]) c = static_cast<double>(v(rng));
    }
    const Dataset d(std::move(schema), std::move(cols),
                    Pattern({Predicate{"B", Op::kEq, 1}}));
    const CoverageSet prot = Coverage(d.protected_pattern(), d);

    const char* names[] = {"A", "B", "C"};
    std::vector<Predicate> preds;
    for (size_t a = 0; a < 3; ++a) {
      if (rng() % 2) {
        const Op op = rng() % 3 == 0 ? Op::kNe : Op::kEq;
        preds.push_back({names[a], op, static_cast<double>(rng() % card[a])});
      }
    }
    const Pattern child(preds);
    std::vector<Predicate> parent_preds;
    for (const Predicate& p : preds) {
      if (rng() % 2) parent_preds.push_back(p);
    }
    const Pattern parent(parent_preds);
    ASSERT_TRUE(PatternRefines(child, parent));
    const CoverageSet cc = Coverage(child, d);
    const CoverageSet pc = Coverage(parent, d);
    EXPECT_TRUE(std::includes(pc.row_ids.begin(), pc.row_ids.end(),
                              cc.row_ids.begin(), cc.row_ids.end()));
    std::vector<uint32_t> both;
    std::set_intersection(cc.row_ids.begin(), cc.row_ids.end(),
                          prot.row_ids.begin(), prot.row_ids.end(),
                          std::back_inserter(both));
    EXPECT_EQ(cc.protected_count, both.size());
    EXPECT_EQ(cc.count, cc.row_ids.size());
    EXPECT_EQ(Coverage(child, d), cc);
  }
}

}  // namespace
}  // namespace faircap
