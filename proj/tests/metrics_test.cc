// Copyright 2026 The gre Authors
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

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "gre/error.h"
#include "gre/extraction.h"
#include "gre/metrics.h"
#include "gre/requirements.h"
#include "test_util.h"

namespace gre {
namespace {

// Oracle: IoU by explicit enumeration over the union, written without set
// algebra helpers so it shares nothing with the implementation.
double BruteIou(std::vector<std::string> a, std::vector<std::string> b) {
  std::vector<std::string> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.empty()) return 1.0;
  int both = 0;
  for (auto const& x : all) {
    bool in_a = std::find(a.begin(), a.end(), x) != a.end();
    bool in_b = std::find(b.begin(), b.end(), x) != b.end();
    if (in_a && in_b) ++both;
  }
  return static_cast<double>(both) / static_cast<double>(all.size());
}

std::vector<std::string> EntityElems(SceneGraph const& g) {
  std::vector<std::string> out;
  for (auto const& [key, e] : g.entities()) out.push_back(e.key());
  return out;
}

std::vector<std::string> TripletElems(SceneGraph const& g) {
  std::vector<std::string> out;
  for (auto const& t : g.triplets()) {
    out.push_back(t.subject().key() + "|" + t.predicate() + "|" + t.object().key());
  }
  return out;
}

std::vector<std::string> PredicateElems(SceneGraph const& g) {
  std::vector<std::string> out;
  for (auto const& t : g.triplets()) out.push_back(t.predicate());
  return out;
}

std::vector<std::string> SgElems(SceneGraph const& g) {
  std::vector<std::string> out;
  for (auto const& e : EntityElems(g)) out.push_back("E:" + e);
  for (auto const& t : TripletElems(g)) out.push_back("T:" + t);
  return out;
}

SceneGraph Graph(std::vector<std::string> entities,
                 std::vector<std::array<std::string, 3>> triplets) {
  SceneGraph g;
  for (auto const& e : entities) g.AddEntity(Entity::FromPhrase(e));
  for (auto const& [s, p, o] : triplets) g.AddTriplet(Triplet::FromStrings(s, p, o));
  return g;
}

TEST(MetricsTest, HandExamples) {
  EXPECT_DOUBLE_EQ(EntIou(Graph({"cat", "mat"}, {}), Graph({"cat", "dog"}, {})),
                   1.0 / 3.0);
  auto ref = Graph({}, {{"cat", "on", "mat"}, {"dog", "near", "mat"}});
  auto cand = Graph({}, {{"cat", "on", "mat"}});
  EXPECT_DOUBLE_EQ(RelIou(ref, cand), 0.5);
  // SG elements: ref {cat, mat, dog, t1, t2}, cand {cat, mat, t1}.
  EXPECT_DOUBLE_EQ(SgIou(ref, cand), 3.0 / 5.0);
}

TEST(MetricsTest, EmptyGraphsScoreOne) {
  SceneGraph empty;
  EXPECT_EQ(SgIou(empty, empty), 1.0);
  EXPECT_EQ(EntIou(empty, empty), 1.0);
  EXPECT_EQ(RelIou(empty, empty), 1.0);
  EXPECT_EQ(EntIou(empty, Graph({"cat"}, {})), 0.0);
}

TEST(MetricsTest, AttributesArePartOfTheKey) {
  EXPECT_EQ(EntIou(Graph({"red cat"}, {}), Graph({"cat"}, {})), 0.0);
  EXPECT_EQ(EntIou(Graph({"the Red cat"}, {}), Graph({"red  cat"}, {})), 1.0);
}

TEST(MetricsTest, MatchesBruteForceOnRandomPairs) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    auto a = testing::RandomGraph(rng);
    auto b = testing::RandomGraph(rng);
    EXPECT_DOUBLE_EQ(SgIou(a, b), BruteIou(SgElems(a), SgElems(b)));
    EXPECT_DOUBLE_EQ(EntIou(a, b), BruteIou(EntityElems(a), EntityElems(b)));
    EXPECT_DOUBLE_EQ(RelIou(a, b), BruteIou(PredicateElems(a), PredicateElems(b)));
    // Symmetric and bounded.
    EXPECT_DOUBLE_EQ(SgIou(a, b), SgIou(b, a));
    EXPECT_DOUBLE_EQ(EntIou(a, b), EntIou(b, a));
    EXPECT_DOUBLE_EQ(RelIou(a, b), RelIou(b, a));
    EXPECT_GE(SgIou(a, b), 0.0);
    EXPECT_LE(SgIou(a, b), 1.0);
    EXPECT_DOUBLE_EQ(SgIou(a, a), 1.0);
  }
}

TEST(MetricsTest, CheckerScoreCountsSatisfied) {
  auto reqs = ParsePrompt("a cat; cat on mat; dog near mat; cozy");
  auto g = Graph({"cat"}, {{"cat", "on", "mat"}});
  EXPECT_DOUBLE_EQ(CheckerScore(g, reqs), 0.5);
  EXPECT_DOUBLE_EQ(CheckerScore(g, reqs, TagJudge({"cozy"})), 0.75);
  EXPECT_EQ(CheckerVerdictBits(g, reqs), (std::vector<bool>{true, true, false, false}));
  try {
    CheckerScore(g, RequirementSet{});
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyRequirements);
  }
}

TEST(MetricsTest, CorpusMeanAndCounts) {
  EvaluationPair p1{Graph({"cat", "mat"}, {}), Graph({"cat", "dog"}, {}),
                    ParsePrompt("a cat"), {}};
  EvaluationPair p2{Graph({"cat"}, {}), Graph({"cat"}, {}),
                    ParsePrompt("a cat; a dog"), {}};
  auto r = CorpusReport({p1, p2});
  EXPECT_DOUBLE_EQ(r.ent_iou, (1.0 / 3.0 + 1.0) / 2.0);
  EXPECT_DOUBLE_EQ(r.checker_score, (1.0 + 0.5) / 2.0);
  EXPECT_EQ(r.counts.satisfied, 2u);
  EXPECT_EQ(r.counts.total, 3u);
  EXPECT_EQ(r.counts.intersection, 2u);  // {cat} + {cat}
  EXPECT_EQ(r.counts.union_size, 4u);    // {cat, mat, dog} + {cat}
}

TEST(MetricsTest, EmptyCorpusIsAnError) {
  try {
    CorpusReport({});
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

TEST(MetricsTest, ReportRendering) {
  MetricReport r;
  r.sg_iou = 0.5;
  auto table = RenderReportTable({{"run", r}});
  EXPECT_NE(table.find("SG-IoU"), std::string::npos);
  EXPECT_NE(table.find("run"), std::string::npos);
  auto lines = RenderReportRecords({{"a", r}, {"b", r}});
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 2);
}

}  // namespace
}  // namespace gre
