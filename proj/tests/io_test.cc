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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "faircap/error.h"
#include "faircap/evaluation.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace faircap::io {
namespace {

CsvTable Csv(const std::string& text) {
  std::istringstream in(text);
  return ReadCsv(in, "data.csv");
}

ErrorCode CodeOf(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kUnknownAttribute;
}

TEST(CsvTest, QuotedFields) {
  const CsvTable t = Csv("a,b,c\r\n1,\"x, y\",\"say \"\"hi\"\"\"\n2,\"multi\nline\",z\n\n");
  ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "x, y");
  EXPECT_EQ(t.rows[0][2], "say \"hi\"");
  EXPECT_EQ(t.rows[1][1], "multi\nline");
  EXPECT_EQ(t.line_numbers, (std::vector<size_t>{2, 3}));
}

TEST(CsvTest, RaggedRowReportsLine) {
  std::string message;
  EXPECT_EQ(CodeOf([] { Csv("a,b\n1,2\n3\n"); }, &message), ErrorCode::kParseError);
  EXPECT_NE(message.find("data.csv:3:"), std::string::npos) << message;
}

TEST(CsvTest, UnterminatedQuote) {
  EXPECT_EQ(CodeOf([] { Csv("a,b\n1,\"open\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { Csv(""); }), ErrorCode::kParseError);
}

TEST(CsvTest, WriteRoundTrip) {
  const std::vector<std::string> fields = {"plain", "with,comma", "q\"uote", ""};
  std::ostringstream out;
  WriteCsvRow(out, {"h1", "h2", "h3", "h4"});
  WriteCsvRow(out, fields);
  const CsvTable t = Csv(out.str());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0], fields);
}

SchemaDeclaration Decl() {
  SchemaDeclaration d;
  d.outcome = "salary";
  d.immutable = {"country", "age"};
  d.mutable_attributes = {"role"};
  d.numeric = {"age"};
  d.bins = 5;
  return d;
}

const char kSurvey[] =
    "id,country,age,role,salary\n"
    "1,US,21,dev,10\n"
    "2,India,22,qa,20\n"
    "3,US,23,dev,30\n"
    "4,China,24,qa,40\n"
    "5,US,25,dev,50\n"
    "6,India,26,qa,60\n"
    "7,US,27,dev,70\n"
    "8,China,28,qa,80\n"
    "9,US,29,dev,90\n"
    "10,India,30,qa,100\n";

TEST(BuildDatasetTest, SchemaFromDeclaration) {
  const Dataset d = BuildDataset(Csv(kSurvey), Decl(), "country = India", "s.csv");
  const Schema& s = d.schema();
  ASSERT_EQ(s.size(), 4u);  // id dropped
  EXPECT_EQ(s.attribute(0).name, "country");
  EXPECT_EQ(s.attribute(0).labels(),
            (std::vector<std::string>{"China", "India", "US"}));
  EXPECT_EQ(s.attribute(1).labels(),
            (std::vector<std::string>{"[21, 23)", "[23, 25)", "[25, 27)",
                                      "[27, 29)", "[29, 30]"}));
  EXPECT_EQ(s.attribute(2).role, Role::kMutable);
  EXPECT_EQ(s.outcome_name(), "salary");
  EXPECT_EQ(d.num_protected(), 3u);
  // Equal-frequency: two rows per bin.
  for (double bin = 0; bin < 5; ++bin) {
    EXPECT_EQ(Coverage(Pattern({Predicate{"age", Op::kEq, bin}}), d).count, 2u);
  }
  EXPECT_EQ(d.cell(9, 1), 4.0);
}

TEST(BuildDatasetTest, ConstantNumericColumn) {
  SchemaDeclaration decl = Decl();
  const Dataset d = BuildDataset(
      Csv("country,age,role,salary\nUS,5,a,1\nUS,5,b,2\n"), decl, "", "c.csv");
  EXPECT_EQ(d.schema().attribute(1).labels(), (std::vector<std::string>{"[5, 5]"}));
}

TEST(BuildDatasetTest, MissingValues) {
  const std::string text =
      "country,age,role,salary\nUS,1,a,1\nNA,2,b,2\nUS,3,,3\nIndia,4,a,4\n";
  std::string message;
  EXPECT_EQ(CodeOf([&] { BuildDataset(Csv(text), Decl(), "", "m.csv"); }, &message),
            ErrorCode::kInvalidDataset);
  EXPECT_NE(message.find("m.csv:3:"), std::string::npos) << message;
  SchemaDeclaration drop = Decl();
  drop.missing = MissingPolicy::kDrop;
  const Dataset d = BuildDataset(Csv(text), drop, "", "m.csv");
  EXPECT_EQ(d.num_rows(), 2u);
}

TEST(BuildDatasetTest, Errors) {
  SchemaDeclaration unknown = Decl();
  unknown.mutable_attributes = {"team"};
  EXPECT_EQ(CodeOf([&] { BuildDataset(Csv(kSurvey), unknown, "", "s"); }),
            ErrorCode::kInvalidSchema);
  SchemaDeclaration twice = Decl();
  twice.mutable_attributes = {"country"};
  EXPECT_EQ(CodeOf([&] { BuildDataset(Csv(kSurvey), twice, "", "s"); }),
            ErrorCode::kInvalidSchema);
  SchemaDeclaration text_outcome = Decl();
  text_outcome.outcome = "role";
  text_outcome.mutable_attributes = {};
  EXPECT_EQ(CodeOf([&] { BuildDataset(Csv(kSurvey), text_outcome, "", "s"); }),
            ErrorCode::kInvalidDataset);
  EXPECT_EQ(CodeOf([&] { BuildDataset(Csv(kSurvey), Decl(), "country = Mars", "s"); }),
            ErrorCode::kInvalidPattern);
}

TEST(PatternTextTest, ParseAndFormat) {
  const Dataset d = BuildDataset(Csv(kSurvey), Decl(), "", "s.csv");
  const Schema& s = d.schema();
  const Pattern p = ParsePattern("  role = qa ;country!=US; age = [25, 27)", s);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(PatternText(p, s), "age = [25, 27); country != US; role = qa");
  EXPECT_EQ(ParsePattern(PatternText(p, s), s), p);
  EXPECT_TRUE(ParsePattern("", s).empty());
  EXPECT_TRUE(ParsePattern("   ", s).empty());
  EXPECT_EQ(PatternText(Pattern(), s), "");
  EXPECT_EQ(CodeOf([&] { ParsePattern("role qa", s); }), ErrorCode::kInvalidPattern);
  EXPECT_EQ(CodeOf([&] { ParsePattern("role = ", s); }), ErrorCode::kInvalidPattern);
  EXPECT_EQ(CodeOf([&] { ParsePattern("role = qa;;", s); }),
            ErrorCode::kInvalidPattern);
  EXPECT_EQ(CodeOf([&] { ParsePattern("team = a", s); }),
            ErrorCode::kUnknownAttribute);
}

TEST(DotTest, ParseSubset) {
  std::istringstream in(
      "# survey graph\n"
      "digraph G {\n"
      "  Gender -> Role;   # edge comment\n"
      "\n"
      "  Role -> Salary;\n"
      "  \"Age\" -> Salary\n"
      "}\n");
  const CausalDag dag = ParseDot(in, "g.dot");
  EXPECT_EQ(dag.edges.size(), 3u);
  EXPECT_TRUE(dag.edges.count({"Age", "Salary"}));
  EXPECT_EQ(dag.nodes.size(), 4u);
}

TEST(DotTest, ErrorsCarryLine) {
  std::string message;
  std::istringstream bad("A -> B;\nA B;\n");
  EXPECT_EQ(CodeOf([&] { ParseDot(bad, "g.dot"); }, &message), ErrorCode::kParseError);
  EXPECT_NE(message.find("g.dot:2:"), std::string::npos) << message;
  std::istringstream chain("A -> B -> C;\n");
  EXPECT_EQ(CodeOf([&] { ParseDot(chain, "g.dot"); }), ErrorCode::kParseError);
  std::istringstream attrs("A -> B [color=red];\n");
  EXPECT_EQ(CodeOf([&] { ParseDot(attrs, "g.dot"); }), ErrorCode::kParseError);
}

TEST(DotTest, WriteRoundTrip) {
  CausalDag dag;
  dag.AddEdge("I0", "M0");
  dag.AddEdge("M0", "O");
  dag.AddEdge("I0", "O");
  std::istringstream in(WriteDot(dag));
  EXPECT_EQ(ParseDot(in, "x"), dag);
}

RunConfig ParseConfig(const std::string& text) {
  std::istringstream in(text);
  return ParseRunConfig(in, "/base", "run.cfg");
}

const char kConfig[] =
    "# example\n"
    "dataset = data/survey.csv\n"
    "dag = /abs/graph.dot\n"
    "outcome = salary\n"
    "immutable = country, age\n"
    "mutable = role\n"
    "numeric = age\n"
    "protected = country = India\n";

TEST(RunConfigTest, DefaultsAndPaths) {
  const RunConfig c = ParseConfig(kConfig);
  EXPECT_EQ(c.dataset, std::filesystem::path("/base/data/survey.csv"));
  EXPECT_EQ(c.dag, std::filesystem::path("/abs/graph.dot"));
  EXPECT_TRUE(c.output.empty());
  EXPECT_EQ(c.schema.immutable, (std::vector<std::string>{"country", "age"}));
  EXPECT_EQ(c.protected_pattern, "country = India");
  EXPECT_EQ(c.selection.fairness.variant, FairnessVariant::kNone);
  EXPECT_DOUBLE_EQ(c.mining.apriori_support, 0.1);
  EXPECT_EQ(c.mining.max_grouping_len, 3u);
  EXPECT_EQ(c.mining.intervention.max_len, 3u);
  EXPECT_DOUBLE_EQ(c.mining.intervention.alpha, 0.05);
  EXPECT_EQ(c.mining.intervention.cate.min_group_size, 10u);
  EXPECT_EQ(c.mining.jobs, 0u);
  EXPECT_EQ(c.schema.bins, 5u);
  EXPECT_DOUBLE_EQ(c.selection.lambda1, 0.01);
  EXPECT_EQ(c.selection.max_rules, 20u);
}

TEST(RunConfigTest, AllKeys) {
  const RunConfig c = ParseConfig(std::string(kConfig) +
                                  "fairness = sp_group\nepsilon = 0.5\n"
                                  "coverage = group\ntheta = 0.7\ntheta_p = 0.6\n"
                                  "lambda1 = 0.1\nlambda2 = 2\nstop_threshold = 0.2\n"
                                  "max_rules = 7\nw_cov = 2\nw_ben = 0.5\nw_util = 0\n"
                                  "expu_denominator = total\napriori_support = 0.2\n"
                                  "max_grouping_len = 2\nmax_intervention_len = 1\n"
                                  "alpha = 0.01\nmin_group_size = 5\njobs = 3\n"
                                  "significance_gate = false\n"
                                  "exhaustive_interventions = true\n"
                                  "bins = 4\nmissing = drop\noutput = out.json\n"
                                  "markdown = out.md\n");
  EXPECT_EQ(c.selection.fairness.variant, FairnessVariant::kSpGroup);
  EXPECT_DOUBLE_EQ(c.selection.fairness.epsilon, 0.5);
  EXPECT_EQ(c.selection.coverage.variant, CoverageVariant::kGroup);
  EXPECT_DOUBLE_EQ(c.selection.coverage.theta_p, 0.6);
  EXPECT_EQ(c.selection.max_rules, 7u);
  EXPECT_DOUBLE_EQ(c.selection.weights.benefit, 0.5);
  EXPECT_EQ(c.selection.denominator, ExpUtilityDenominator::kTotal);
  EXPECT_EQ(c.mining.intervention.max_len, 1u);
  EXPECT_FALSE(c.mining.intervention.significance_gate);
  EXPECT_TRUE(c.mining.intervention.exhaustive);
  EXPECT_EQ(c.mining.jobs, 3u);
  EXPECT_EQ(c.schema.missing, MissingPolicy::kDrop);
  EXPECT_EQ(c.output, std::filesystem::path("/base/out.json"));
}

TEST(RunConfigTest, ErrorsCarryLine) {
  auto message_of = [](const std::string& text) {
    std::string message;
    EXPECT_EQ(CodeOf([&] { ParseConfig(text); }, &message),
              ErrorCode::kInvalidConfig);
    return message;
  };
  EXPECT_NE(message_of(std::string(kConfig) + "colour = red\n").find("run.cfg:9:"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(kConfig) + "theta = lots\n").find("run.cfg:9: theta"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(kConfig) + "outcome = x\n").find("duplicate"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(kConfig) + "fairness = maximal\n").find("run.cfg:9:"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(kConfig) + "just text\n").find("run.cfg:9:"),
            std::string::npos);
  EXPECT_NE(message_of("dataset = a.csv\n").find("missing required key 'dag'"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(kConfig) + "fairness = sp_group\n").find("epsilon"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(kConfig) + "apriori_support = 0\n").find("run.cfg:9:"),
            std::string::npos);
  EXPECT_NE(message_of(std::string(kConfig) + "jobs = -1\n").find("run.cfg:9:"),
            std::string::npos);
}

class ReportTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticSpec spec;
    spec.n_rows = 1500;
    spec.seed = 5;
    spec.effects = {{0, 1, 0.5, 3.0}};
    world_ = std::make_unique<SyntheticWorld>(GenerateSynthetic(spec));
    config_.protected_pattern = "I0 = v0";
    config_.mining.jobs = 1;
    result_ = RunPipeline(world_->dataset, world_->dag, config_.mining,
                          config_.selection);
  }

  std::unique_ptr<SyntheticWorld> world_;
  RunConfig config_;
  PipelineResult result_;
};

TEST_F(ReportTest, RoundTrip) {
  ASSERT_FALSE(result_.selection.rules.empty());
  const std::string text = RenderReport(config_, world_->dataset, result_);
  EXPECT_EQ(text, RenderReport(config_, world_->dataset, result_));
  const ParsedReport parsed = ParseReport(text, world_->dataset.schema());
  EXPECT_EQ(parsed.status, "ok");
  EXPECT_EQ(parsed.metrics, result_.selection.metrics);
  ASSERT_EQ(parsed.rules.size(), result_.selection.rules.size());
  for (size_t i = 0; i < parsed.rules.size(); ++i) {
    EXPECT_EQ(parsed.rules[i].grouping, result_.selection.rules[i].grouping);
    EXPECT_EQ(parsed.rules[i].intervention, result_.selection.rules[i].intervention);
    EXPECT_EQ(parsed.rules[i].utility, result_.selection.rules[i].utility);
  }
  const auto json = nlohmann::json::parse(text);
  EXPECT_EQ(json["schema_version"], 1);
  EXPECT_FALSE(json["config"].contains("jobs"));
  EXPECT_EQ(json["rules"][0]["text"],
            RenderRule(result_.selection.rules[0], world_->dataset.schema()));
}

TEST_F(ReportTest, CheckDetectsTampering) {
  const std::string text = RenderReport(config_, world_->dataset, result_);
  const LoadedInputs inputs{world_->dataset, world_->dag};
  ParsedReport parsed = ParseReport(text, world_->dataset.schema());
  EXPECT_TRUE(CheckReport(parsed, inputs, config_).matches());
  parsed.rules[0].utility += 0.25;
  const ReportCheck check = CheckReport(parsed, inputs, config_);
  EXPECT_FALSE(check.matches());
  EXPECT_NE(check.mismatches[0].find("rule 0: utility"), std::string::npos);
}

TEST_F(ReportTest, SchemaMismatch) {
  const Schema& s = world_->dataset.schema();
  auto json = nlohmann::json::parse(RenderReport(config_, world_->dataset, result_));
  json["schema_version"] = 2;
  EXPECT_EQ(CodeOf([&] { ParseReport(json.dump(), s); }), ErrorCode::kSchemaMismatch);
  json["schema_version"] = 1;
  json["rules"][0]["grouping"][0]["attribute"] = "Height";
  EXPECT_EQ(CodeOf([&] { ParseReport(json.dump(), s); }), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(CodeOf([&] { ParseReport("{not json", s); }), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(CodeOf([&] { ParseReport("{\"schema_version\": 1}", s); }),
            ErrorCode::kSchemaMismatch);
}

TEST(DatasetCsvTest, WriteThenReadBack) {
  SyntheticSpec spec;
  spec.n_rows = 50;
  const SyntheticWorld w = GenerateSynthetic(spec);
  std::ostringstream out;
  WriteDatasetCsv(out, w.dataset);
  SchemaDeclaration decl;
  decl.outcome = "O";
  decl.immutable = {"I0", "I1", "I2"};
  decl.mutable_attributes = {"M0", "M1"};
  const Dataset back = BuildDataset(Csv(out.str()), decl, "I0 = v0", "w.csv");
  ASSERT_EQ(back.num_rows(), 50u);
  EXPECT_EQ(back.num_protected(), w.dataset.num_protected());
  for (size_t r = 0; r < 50; ++r) {
    EXPECT_EQ(back.outcome()[r], w.dataset.outcome()[r]);
  }
}

}  // namespace
}  // namespace faircap::io
