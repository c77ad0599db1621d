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

#ifndef GRE_SCENE_GRAPH_H_
#define GRE_SCENE_GRAPH_H_

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gre {

/// Lowercases, collapses whitespace, and strips leading articles
/// ("a", "an", "the"). Idempotent. May return an empty string.
std::string NormalizeLabel(std::string_view raw);

/// Lowercases and collapses whitespace only. Predicates and description
/// clauses are not article-stripped or stemmed.
std::string NormalizeText(std::string_view raw);

/// Splits on whitespace.
std::vector<std::string> Tokenize(std::string_view text);

/// An object in a scene. `label` is the head noun (last token of the noun
/// phrase); `attributes` are the preceding modifier tokens in order.
class Entity {
 public:
  Entity() = default;

  /// Parses a noun phrase such as "The tall old building". Throws
  /// kInvalidArgument when nothing is left after normalization.
  static Entity FromPhrase(std::string_view phrase);

  Entity(std::string label, std::vector<std::string> attributes);

  std::string const& label() const { return label_; }
  std::vector<std::string> const& attributes() const { return attributes_; }

  /// Canonical phrase "attr1 attr2 label"; the identity of the entity
  /// inside a graph and the element compared by the metrics.
  std::string const& key() const { return key_; }

  /// True when `label` agrees and this entity carries every attribute of
  /// `required`.
  bool Covers(Entity const& required) const;

  friend bool operator==(Entity const& a, Entity const& b) {
    return a.key_ == b.key_;
  }
  friend auto operator<=>(Entity const& a, Entity const& b) {
    return a.key_ <=> b.key_;
  }

 private:
  std::string label_;
  std::vector<std::string> attributes_;
  std::string key_;
};

/// Directed (subject, predicate, object) relation.
class Triplet {
 public:
  Triplet() = default;
  Triplet(Entity subject, std::string predicate, Entity object);

  static Triplet FromStrings(std::string_view subject,
                             std::string_view predicate,
                             std::string_view object);

  Entity const& subject() const { return subject_; }
  std::string const& predicate() const { return predicate_; }
  Entity const& object() const { return object_; }

  /// "subject|predicate|object" over entity keys.
  std::string Key() const;

  /// Clause form "subject predicate object".
  std::string Text() const;

  /// Relation-requirement match: same predicate, endpoints covered.
  bool Covers(Triplet const& required) const;

  friend bool operator==(Triplet const& a, Triplet const& b) {
    return a.subject_ == b.subject_ && a.predicate_ == b.predicate_ &&
           a.object_ == b.object_;
  }
  friend auto operator<=>(Triplet const& a, Triplet const& b) {
    if (auto c = a.subject_ <=> b.subject_; c != 0) return c;
    if (auto c = a.predicate_ <=> b.predicate_; c != 0) return c;
    return a.object_ <=> b.object_;
  }

 private:
  Entity subject_;
  std::string predicate_;
  Entity object_;
};

/// Set of entities plus a set of triplets whose endpoints are always
/// members of the entity set. Ordered containers give every iteration a
/// canonical order, which the renderers and fingerprints rely on.
class SceneGraph {
 public:
  /// Returns false when an entity with the same key already exists.
  bool AddEntity(Entity const& entity);

  /// Adds the triplet and any missing endpoint. Returns false on duplicate.
  bool AddTriplet(Triplet const& triplet);

  /// Removes the triplet; endpoints stay. Returns false when absent.
  bool RemoveTriplet(Triplet const& triplet);

  bool HasEntity(std::string const& key) const {
    return entities_.contains(key);
  }
  bool HasTriplet(Triplet const& triplet) const {
    return triplets_.contains(triplet);
  }

  /// Any entity covering `required` (label match, attribute superset).
  bool HasEntityCovering(Entity const& required) const;
  /// Any triplet covering `required`.
  bool HasTripletCovering(Triplet const& required) const;

  std::map<std::string, Entity> const& entities() const { return entities_; }
  std::set<Triplet> const& triplets() const { return triplets_; }

  std::set<std::string> EntityKeys() const;
  std::set<std::string> TripletKeys() const;
  std::set<std::string> Predicates() const;

  bool empty() const { return entities_.empty() && triplets_.empty(); }

  friend bool operator==(SceneGraph const& a, SceneGraph const& b) = default;

 private:
  std::map<std::string, Entity> entities_;
  std::set<Triplet> triplets_;
};

}  // namespace gre

#endif  // GRE_SCENE_GRAPH_H_
