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

#include "gre/requirements.h"

#include <algorithm>
#include <cctype>
#include <optional>

#include "gre/error.h"
#include "gre/vocabulary.h"

namespace gre {
namespace {

bool IsWordToken(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '-' || c == '\'';
         });
}

bool AllWords(std::vector<std::string> const& tokens) {
  return !tokens.empty() && std::all_of(tokens.begin(), tokens.end(),
                                        [](auto const& t) {
                                          return IsWordToken(t);
                                        });
}

std::string JoinRange(std::vector<std::string> const& tokens, std::size_t begin,
                      std::size_t end) {
  std::string out;
  for (auto i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::optional<Triplet> MatchRelation(std::vector<std::string> const& tokens,
                                     Lexicon const& lexicon) {
  std::optional<Triplet> best;
  std::size_t best_len = 0;
  std::size_t best_pos = 0;
  for (auto const& predicate : lexicon.predicates) {
    auto ptoks = Tokenize(predicate);
    if (ptoks.empty() || ptoks.size() + 2 > tokens.size()) continue;
    for (std::size_t i = 1; i + ptoks.size() < tokens.size(); ++i) {
      if (!std::equal(ptoks.begin(), ptoks.end(), tokens.begin() + i)) {
        continue;
      }
      bool better = ptoks.size() > best_len ||
                    (ptoks.size() == best_len && i < best_pos);
      if (best && !better) continue;
      std::vector<std::string> left(tokens.begin(), tokens.begin() + i);
      std::vector<std::string> right(tokens.begin() + i + ptoks.size(),
                                     tokens.end());
      if (!AllWords(left) || !AllWords(right)) continue;
      auto subject = NormalizeLabel(JoinRange(left, 0, left.size()));
      auto object = NormalizeLabel(JoinRange(right, 0, right.size()));
      if (subject.empty() || object.empty()) continue;
      best = Triplet(Entity::FromPhrase(subject), predicate,
                     Entity::FromPhrase(object));
      best_len = ptoks.size();
      best_pos = i;
    }
  }
  return best;
}

}  // namespace

std::string_view RequirementKindName(RequirementKind kind) {
  switch (kind) {
    case RequirementKind::kObject: return "object";
    case RequirementKind::kRelation: return "relation";
    case RequirementKind::kDescription: return "description";
  }
  return "unknown";
}

Requirement Requirement::Object(Entity entity) {
  return Requirement(RequirementKind::kObject, std::move(entity));
}

Requirement Requirement::Relation(Triplet triplet) {
  return Requirement(RequirementKind::kRelation, std::move(triplet));
}

Requirement Requirement::Description(std::string text) {
  auto normalized = NormalizeText(text);
  if (normalized.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty description");
  }
  return Requirement(RequirementKind::kDescription, std::move(normalized));
}

Entity const& Requirement::entity() const {
  if (kind_ != RequirementKind::kObject) {
    throw Error(ErrorCode::kInvalidArgument, "requirement is not an object");
  }
  return std::get<Entity>(payload_);
}

Triplet const& Requirement::triplet() const {
  if (kind_ != RequirementKind::kRelation) {
    throw Error(ErrorCode::kInvalidArgument, "requirement is not a relation");
  }
  return std::get<Triplet>(payload_);
}

std::string const& Requirement::description() const {
  if (kind_ != RequirementKind::kDescription) {
    throw Error(ErrorCode::kInvalidArgument,
                "requirement is not a description");
  }
  return std::get<std::string>(payload_);
}

std::string Requirement::Text() const {
  switch (kind_) {
    case RequirementKind::kObject: return "a " + entity().key();
    case RequirementKind::kRelation: return triplet().Text();
    case RequirementKind::kDescription: return description();
  }
  return {};
}

Lexicon const& Lexicon::Default() {
  static Lexicon const lexicon = [] {
    Lexicon lex;
    auto const& vocab = Vocabulary::Builtin();
    lex.predicates = vocab.predicates;
    for (auto const* extra :
         {"hanging from", "adjacent to", "following", "parked beside",
          "sitting on", "standing on", "leaning against", "walking on",
          "wearing", "carrying", "looking at", "covered with", "lying on",
          "flying over", "parked on", "floating on", "growing on",
          "reflected in"}) {
      lex.predicates.emplace_back(extra);
    }
    for (auto const& e : vocab.entities) {
      lex.nouns.insert(Entity::FromPhrase(e).label());
    }
    for (auto const* extra :
         {"lantern", "vehicle", "taxi", "lighthouse", "castle", "sheep",
          "girl", "boy", "woman", "man", "sky", "moon", "sun", "bridge",
          "hat", "shelf", "vase", "candle", "rug", "sofa", "painting",
          "street", "ship", "wave", "rock", "hill", "owl", "fox", "cow",
          "mat", "field", "garden", "fountain", "statue", "tower"}) {
      lex.nouns.insert(extra);
    }
    return lex;
  }();
  return lexicon;
}

Requirement ParseClause(std::string_view clause, Lexicon const& lexicon) {
  auto normalized = NormalizeText(clause);
  if (normalized.empty()) {
    throw Error(ErrorCode::kEmptyPrompt, "empty clause");
  }
  auto tokens = Tokenize(normalized);
  if (auto relation = MatchRelation(tokens, lexicon)) {
    return Requirement::Relation(*std::move(relation));
  }
  auto stripped = Tokenize(NormalizeLabel(normalized));
  bool has_article = tokens.front() == "a" || tokens.front() == "an" ||
                     tokens.front() == "the";
  if (AllWords(stripped) && stripped.size() <= lexicon.max_object_tokens &&
      (has_article || lexicon.nouns.contains(stripped.back()))) {
    return Requirement::Object(
        Entity::FromPhrase(JoinRange(stripped, 0, stripped.size())));
  }
  return Requirement::Description(normalized);
}

RequirementSet ParsePrompt(std::string_view text, Lexicon const& lexicon) {
  RequirementSet reqs;
  reqs.source_prompt = std::string(text);
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    auto clause = text.substr(start, end - start);
    if (!NormalizeText(clause).empty()) {
      reqs.items.push_back(ParseClause(clause, lexicon));
    }
    start = end + 1;
  }
  if (reqs.items.empty()) {
    throw Error(ErrorCode::kEmptyPrompt,
                "prompt '" + std::string(text) + "' has no clauses");
  }
  return reqs;
}

std::string RenderPrompt(RequirementSet const& reqs) {
  std::string out;
  for (auto const& r : reqs.items) {
    if (!out.empty()) out += "; ";
    out += r.Text();
  }
  return out;
}

bool Satisfies(SceneGraph const& graph, Requirement const& req,
               DescriptionJudge const& judge) {
  switch (req.kind()) {
    case RequirementKind::kObject:
      return graph.HasEntityCovering(req.entity());
    case RequirementKind::kRelation:
      return graph.HasTripletCovering(req.triplet());
    case RequirementKind::kDescription:
      return judge ? judge(req.description()) : false;
  }
  return false;
}

DescriptionJudge TagJudge(std::set<std::string> const& tags) {
  return [tags](std::string_view text) {
    return tags.contains(std::string(text));
  };
}

SceneGraph RequirementGraph(RequirementSet const& reqs) {
  SceneGraph graph;
  for (auto const& r : reqs.items) {
    if (r.kind() == RequirementKind::kObject) graph.AddEntity(r.entity());
    if (r.kind() == RequirementKind::kRelation) graph.AddTriplet(r.triplet());
  }
  return graph;
}

}  // namespace gre
