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

#include "gre/scene_graph.h"

#include <algorithm>
#include <cctype>

#include "gre/error.h"

namespace gre {
namespace {

bool IsArticle(std::string_view token) {
  return token == "a" || token == "an" || token == "the";
}

std::string Join(std::vector<std::string> const& tokens) {
  std::string out;
  for (auto const& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string NormalizeText(std::string_view raw) {
  std::string lowered(raw);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return Join(Tokenize(lowered));
}

std::string NormalizeLabel(std::string_view raw) {
  auto tokens = Tokenize(NormalizeText(raw));
  auto first = std::find_if_not(tokens.begin(), tokens.end(),
                                [](auto const& t) { return IsArticle(t); });
  tokens.erase(tokens.begin(), first);
  return Join(tokens);
}

Entity::Entity(std::string label, std::vector<std::string> attributes)
    : label_(std::move(label)) {
  if (label_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "entity label is empty");
  }
  for (auto& a : attributes) {
    if (std::find(attributes_.begin(), attributes_.end(), a) ==
        attributes_.end()) {
      attributes_.push_back(std::move(a));
    }
  }
  auto parts = attributes_;
  parts.push_back(label_);
  key_ = Join(parts);
}

Entity Entity::FromPhrase(std::string_view phrase) {
  auto tokens = Tokenize(NormalizeLabel(phrase));
  if (tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "noun phrase '" + std::string(phrase) + "' is empty");
  }
  auto label = tokens.back();
  tokens.pop_back();
  return Entity(std::move(label), std::move(tokens));
}

bool Entity::Covers(Entity const& required) const {
  if (label_ != required.label_) return false;
  return std::all_of(required.attributes_.begin(), required.attributes_.end(),
                     [&](auto const& a) {
                       return std::find(attributes_.begin(), attributes_.end(),
                                        a) != attributes_.end();
                     });
}

Triplet::Triplet(Entity subject, std::string predicate, Entity object)
    : subject_(std::move(subject)),
      predicate_(NormalizeText(predicate)),
      object_(std::move(object)) {
  if (predicate_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "triplet predicate is empty");
  }
}

Triplet Triplet::FromStrings(std::string_view subject,
                             std::string_view predicate,
                             std::string_view object) {
  return Triplet(Entity::FromPhrase(subject), std::string(predicate),
                 Entity::FromPhrase(object));
}

std::string Triplet::Key() const {
  return subject_.key() + "|" + predicate_ + "|" + object_.key();
}

std::string Triplet::Text() const {
  return subject_.key() + " " + predicate_ + " " + object_.key();
}

bool Triplet::Covers(Triplet const& required) const {
  return predicate_ == required.predicate_ &&
         subject_.Covers(required.subject_) &&
         object_.Covers(required.object_);
}

bool SceneGraph::AddEntity(Entity const& entity) {
  return entities_.emplace(entity.key(), entity).second;
}

bool SceneGraph::AddTriplet(Triplet const& triplet) {
  AddEntity(triplet.subject());
  AddEntity(triplet.object());
  return triplets_.insert(triplet).second;
}

bool SceneGraph::RemoveTriplet(Triplet const& triplet) {
  return triplets_.erase(triplet) > 0;
}

bool SceneGraph::HasEntityCovering(Entity const& required) const {
  return std::any_of(entities_.begin(), entities_.end(), [&](auto const& kv) {
    return kv.second.Covers(required);
  });
}

bool SceneGraph::HasTripletCovering(Triplet const& required) const {
  return std::any_of(triplets_.begin(), triplets_.end(),
                     [&](auto const& t) { return t.Covers(required); });
}

std::set<std::string> SceneGraph::EntityKeys() const {
  std::set<std::string> keys;
  for (auto const& [key, entity] : entities_) keys.insert(key);
  return keys;
}

std::set<std::string> SceneGraph::TripletKeys() const {
  std::set<std::string> keys;
  for (auto const& t : triplets_) keys.insert(t.Key());
  return keys;
}

std::set<std::string> SceneGraph::Predicates() const {
  std::set<std::string> predicates;
  for (auto const& t : triplets_) predicates.insert(t.predicate());
  return predicates;
}

}  // namespace gre
