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

#include <random>

#include <gtest/gtest.h>

#include "gre/error.h"
#include "gre/extraction.h"
#include "gre/requirements.h"
#include "gre/scene_graph.h"
#include "test_util.h"

namespace gre {
namespace {

TEST(NormalizeLabelTest, Examples) {
  EXPECT_EQ(NormalizeLabel("The  Tall Building"), "tall building");
  EXPECT_EQ(NormalizeLabel("cat"), "cat");
  EXPECT_EQ(NormalizeLabel("  A  "), "");
  EXPECT_EQ(NormalizeLabel("the a an dog"), "dog");
}

TEST(NormalizeLabelTest, Idempotent) {
  for (std::string s : {"The  Tall Building", "  A  ", "an\tOld\n cat",
                        "THE THE end", "x"}) {
    EXPECT_EQ(NormalizeLabel(NormalizeLabel(s)), NormalizeLabel(s)) << s;
  }
}

TEST(EntityTest, PhraseSplitsHeadAndAttributes) {
  auto e = Entity::FromPhrase("The red red glowing Lantern");
  EXPECT_EQ(e.label(), "lantern");
  EXPECT_EQ(e.attributes(), (std::vector<std::string>{"red", "glowing"}));
  EXPECT_EQ(e.key(), "red glowing lantern");
  EXPECT_THROW(Entity::FromPhrase(" the "), Error);
}

TEST(EntityTest, AttributeSupersetCovers) {
  auto plain = Entity::FromPhrase("lantern");
  auto red = Entity::FromPhrase("red lantern");
  auto red_glowing = Entity::FromPhrase("red glowing lantern");
  EXPECT_TRUE(red_glowing.Covers(red));
  EXPECT_TRUE(red.Covers(plain));
  EXPECT_FALSE(plain.Covers(red));
  EXPECT_FALSE(Entity::FromPhrase("red lamp").Covers(red));
}

TEST(ParsePromptTest, RelationAndDescription) {
  auto reqs = ParsePrompt("red lantern hanging from building; fantasy");
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs.items[0].kind(), RequirementKind::kRelation);
  EXPECT_EQ(reqs.items[0].triplet(),
            Triplet::FromStrings("red lantern", "hanging from", "building"));
  EXPECT_EQ(reqs.items[1],
            Requirement::Description("fantasy"));
}

TEST(ParsePromptTest, SingleObject) {
  auto reqs = ParsePrompt("a cat");
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs.items[0], Requirement::Object(Entity::FromPhrase("cat")));
}

TEST(ParsePromptTest, EmptyPrompt) {
  try {
    ParsePrompt("  ;  ; ");
    FAIL() << "expected EmptyPrompt";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPrompt);
  }
}

TEST(ParsePromptTest, OrderPreservedAndClauseCountMatches) {
  auto reqs = ParsePrompt(
      "a dog; cat on mat; watercolor style; a tall old building; "
      "man in front of bus");
  ASSERT_EQ(reqs.size(), 5u);
  EXPECT_EQ(reqs.items[0].kind(), RequirementKind::kObject);
  EXPECT_EQ(reqs.items[1].kind(), RequirementKind::kRelation);
  EXPECT_EQ(reqs.items[2].kind(), RequirementKind::kDescription);
  EXPECT_EQ(reqs.items[3].kind(), RequirementKind::kObject);
  EXPECT_EQ(reqs.items[4].triplet().predicate(), "in front of");
}

TEST(ParsePromptTest, LongestPredicateWins) {
  // "next to" must beat a shorter predicate that happens to be a token.
  auto r = ParseClause("bottle next to cup");
  ASSERT_EQ(r.kind(), RequirementKind::kRelation);
  EXPECT_EQ(r.triplet().predicate(), "next to");
}

TEST(ParsePromptTest, TextRoundTrip) {
  auto reqs = ParsePrompt(
      "a red kite; kite above field; cozy interior; "
      "small sign attached to tall old building");
  auto again = ParsePrompt(RenderPrompt(reqs));
  EXPECT_EQ(again.items, reqs.items);
}

TEST(ExtractionTest, HandBuiltDocument) {
  auto g = ParseExtractionText(
      R"({"scene_graph": [["cat","on","mat"]], "object_list": ["cat","mat"],
          "predicate_list": ["on"]})");
  EXPECT_EQ(g.entities().size(), 2u);
  EXPECT_EQ(g.triplets().size(), 1u);
  EXPECT_TRUE(g.HasTriplet(Triplet::FromStrings("cat", "on", "mat")));
}

TEST(ExtractionTest, EmptyDocument) {
  auto g = ParseExtractionText(
      R"({"scene_graph": [], "object_list": [], "predicate_list": []})");
  EXPECT_TRUE(g.empty());
}

TEST(ExtractionTest, UnseenEndpointsAreAdded) {
  auto g = ParseExtractionText(
      R"({"scene_graph": [["cat","on","mat"],["cat","on","mat"]],
          "object_list": [], "predicate_list": ["on"]})");
  EXPECT_TRUE(g.HasEntity("cat"));
  EXPECT_TRUE(g.HasEntity("mat"));
  EXPECT_EQ(g.triplets().size(), 1u);
}

TEST(ExtractionTest, MalformedDocuments) {
  for (char const* doc :
       {R"({"scene_graph": [["a","on"]], "object_list": [], "predicate_list": []})",
        R"({"object_list": [], "predicate_list": []})",
        R"({"scene_graph": [], "object_list": [3], "predicate_list": []})",
        R"({"scene_graph": [], "object_list": [], "predicate_list": {}})",
        R"(not json)"}) {
    try {
      ParseExtractionText(doc);
      ADD_FAILURE() << doc;
    } catch (Error const& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedDocument) << doc;
    }
  }
}

TEST(ExtractionTest, RoundTripRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto g = testing::RandomGraph(rng);
    auto text = RenderExtractionDocument(g);
    auto back = ParseExtractionText(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(RenderExtractionDocument(back), text);  // bit-exact
  }
}

TEST(SatisfiesTest, Examples) {
  SceneGraph g;
  g.AddTriplet(Triplet::FromStrings("cat", "on", "mat"));
  EXPECT_TRUE(Satisfies(g, ParseClause("cat on mat")));
  EXPECT_FALSE(Satisfies(g, ParseClause("mat on cat")));
  EXPECT_FALSE(Satisfies(SceneGraph(), ParseClause("a cat")));
  EXPECT_TRUE(Satisfies(g, ParseClause("a cat")));
}

TEST(SatisfiesTest, AttributeSuperset) {
  SceneGraph g;
  g.AddEntity(Entity::FromPhrase("lantern"));
  EXPECT_FALSE(Satisfies(g, ParseClause("a red glowing lantern")));
  g.AddEntity(Entity::FromPhrase("red glowing old lantern"));
  EXPECT_TRUE(Satisfies(g, ParseClause("a red glowing lantern")));
}

TEST(SatisfiesTest, DescriptionsGoToTheJudge) {
  SceneGraph g;
  auto req = Requirement::Description("Soft  Evening light");
  EXPECT_FALSE(Satisfies(g, req));
  EXPECT_TRUE(Satisfies(g, req, TagJudge({"soft evening light"})));
  EXPECT_FALSE(Satisfies(g, req, TagJudge({"evening"})));
}

TEST(SatisfiesTest, MonotoneUnderAdditions) {
  std::mt19937_64 rng(5);
  auto const& labels = testing::TestLabels();
  auto const& preds = testing::TestPredicates();
  for (int i = 0; i < 300; ++i) {
    auto g = testing::RandomGraph(rng);
    std::vector<Requirement> reqs;
    for (auto const& l : labels) reqs.push_back(Requirement::Object(Entity::FromPhrase(l)));
    for (auto const& p : preds) {
      reqs.push_back(Requirement::Relation(
          Triplet::FromStrings(labels[i % labels.size()], p, labels[(i + 1) % labels.size()])));
    }
    std::vector<bool> before;
    for (auto const& r : reqs) before.push_back(Satisfies(g, r));
    auto bigger = g;
    auto extra = testing::RandomGraph(rng);
    for (auto const& [k, e] : extra.entities()) bigger.AddEntity(e);
    for (auto const& t : extra.triplets()) bigger.AddTriplet(t);
    for (std::size_t k = 0; k < reqs.size(); ++k) {
      if (before[k]) EXPECT_TRUE(Satisfies(bigger, reqs[k]));
    }
  }
}

TEST(SatisfiesTest, DirectionIndependence) {
  auto ab = Requirement::Relation(Triplet::FromStrings("cat", "on", "mat"));
  auto ba = Requirement::Relation(Triplet::FromStrings("mat", "on", "cat"));
  for (int mask = 0; mask < 4; ++mask) {
    SceneGraph g;
    if (mask & 1) g.AddTriplet(ab.triplet());
    if (mask & 2) g.AddTriplet(ba.triplet());
    EXPECT_EQ(Satisfies(g, ab), (mask & 1) != 0);
    EXPECT_EQ(Satisfies(g, ba), (mask & 2) != 0);
  }
}

TEST(SceneGraphTest, TripletEndpointsAlwaysPresent) {
  SceneGraph g;
  g.AddTriplet(Triplet::FromStrings("the dog", "Next  To", "a bench"));
  EXPECT_TRUE(g.HasEntity("dog"));
  EXPECT_TRUE(g.HasEntity("bench"));
  EXPECT_TRUE(g.HasTriplet(Triplet::FromStrings("dog", "next to", "bench")));
  EXPECT_FALSE(g.AddTriplet(Triplet::FromStrings("dog", "next to", "bench")));
  EXPECT_TRUE(g.RemoveTriplet(Triplet::FromStrings("dog", "next to", "bench")));
  EXPECT_TRUE(g.HasEntity("dog"));
}

}  // namespace
}  // namespace gre
