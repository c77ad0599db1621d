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

#ifndef GRE_REQUIREMENTS_H_
#define GRE_REQUIREMENTS_H_

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gre/scene_graph.h"

namespace gre {

enum class RequirementKind { kObject, kRelation, kDescription };

std::string_view RequirementKindName(RequirementKind kind);

/// One clause of a prompt: an object, a directed relation, or a free-text
/// description.
class Requirement {
 public:
  static Requirement Object(Entity entity);
  static Requirement Relation(Triplet triplet);
  static Requirement Description(std::string text);

  RequirementKind kind() const { return kind_; }
  Entity const& entity() const;
  Triplet const& triplet() const;
  std::string const& description() const;

  /// Canonical clause text ("a cat", "cat on mat", "fantasy").
  std::string Text() const;

  friend bool operator==(Requirement const&, Requirement const&) = default;

 private:
  Requirement(RequirementKind kind,
              std::variant<Entity, Triplet, std::string> payload)
      : kind_(kind), payload_(std::move(payload)) {}

  RequirementKind kind_;
  std::variant<Entity, Triplet, std::string> payload_;
};

struct RequirementSet {
  std::vector<Requirement> items;
  std::string source_prompt;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

/// Predicate phrases and nouns that drive clause classification.
struct Lexicon {
  std::vector<std::string> predicates;
  std::set<std::string> nouns;
  std::size_t max_object_tokens = 4;

  /// Built-in lexicon: the simulator vocabulary plus the relation phrases
  /// that appear in the benchmark prompts.
  static Lexicon const& Default();
};

/// Splits `text` on ';' and classifies each clause. Relation: the longest
/// lexicon predicate (leftmost on ties) with a word-only noun phrase on both
/// sides. Object: a word-only phrase of at most `max_object_tokens` tokens
/// that starts with an article or ends in a lexicon noun. Anything else is a
/// Description. Throws kEmptyPrompt when no clause survives.
RequirementSet ParsePrompt(std::string_view text,
                           Lexicon const& lexicon = Lexicon::Default());

/// Classifies a single clause; nullopt-free: throws kEmptyPrompt on an empty
/// clause.
Requirement ParseClause(std::string_view clause,
                        Lexicon const& lexicon = Lexicon::Default());

/// Renders the set back to prompt text, clauses joined by "; ".
std::string RenderPrompt(RequirementSet const& reqs);

/// Decides Description requirements. Null means "never satisfied".
using DescriptionJudge = std::function<bool(std::string_view)>;

/// Object: some entity covers the required one. Relation: some triplet
/// covers it (direction-sensitive). Description: delegated to `judge`.
bool Satisfies(SceneGraph const& graph, Requirement const& req,
               DescriptionJudge const& judge = {});

/// Judge backed by an exact tag set.
DescriptionJudge TagJudge(std::set<std::string> const& tags);

/// The scene graph a prompt asks for: every Object entity and Relation
/// triplet. Used as the reference graph when scoring simulator episodes.
SceneGraph RequirementGraph(RequirementSet const& reqs);

}  // namespace gre

#endif  // GRE_REQUIREMENTS_H_
