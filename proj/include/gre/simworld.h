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

#ifndef GRE_SIMWORLD_H_
#define GRE_SIMWORLD_H_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gre/random.h"
#include "gre/requirements.h"
#include "gre/scene_graph.h"
#include "gre/vocabulary.h"

namespace gre {

/// Parameters of the stochastic "generator". Requirement i is realized with
/// probability `per_requirement[i]` when present, else `base_probability`;
/// the number of spurious triplets is Poisson(`distractor_rate`).
struct GenSpec {
  double base_probability = 0.6;
  std::vector<double> per_requirement;
  double distractor_rate = 2.0;
  std::uint64_t rng_seed = 0;

  double Probability(std::size_t index) const;
  void Validate() const;
};

/// Simulator state standing in for an image: a scene graph, the set of
/// realized description tags, and the audit trail of consumed draws.
struct WorldState {
  SceneGraph graph;
  std::set<std::string> description_tags;
  int step_index = 0;
  std::vector<std::uint64_t> seed_trace;

  friend bool operator==(WorldState const&, WorldState const&) = default;
};

enum class EditKind { kAddTriplet, kRemoveTriplet, kAddEntity, kAddTag, kNoop };

inline constexpr std::size_t kEditKindCount = 5;
inline constexpr std::size_t kTrainableEditKinds = 4;  // all but Noop

std::string_view EditKindName(EditKind kind);

class EditAction {
 public:
  static EditAction AddTriplet(Triplet t);
  static EditAction RemoveTriplet(Triplet t);
  static EditAction AddEntity(Entity e);
  static EditAction AddTag(std::string tag);
  static EditAction Noop();

  /// Inverse of Text(); throws kInvalidArgument when the clause does not
  /// describe an edit.
  static EditAction FromText(std::string_view text,
                             Lexicon const& lexicon = Lexicon::Default());

  /// The edit that would satisfy `req`.
  static EditAction FixFor(Requirement const& req);

  EditKind kind() const { return kind_; }
  Triplet const& triplet() const { return std::get<Triplet>(payload_); }
  Entity const& entity() const { return std::get<Entity>(payload_); }
  std::string const& tag() const { return std::get<std::string>(payload_); }

  /// Edit-prompt clause: "s p o", "remove s p o", "a e", "<tag>",
  /// "no change".
  std::string Text() const;

  friend bool operator==(EditAction const&, EditAction const&) = default;

 private:
  EditAction(EditKind kind,
             std::variant<std::monostate, Triplet, Entity, std::string> p)
      : kind_(kind), payload_(std::move(p)) {}

  EditKind kind_ = EditKind::kNoop;
  std::variant<std::monostate, Triplet, Entity, std::string> payload_;
};

/// Trainable editor: one success logit per non-Noop action kind plus a
/// fixed collateral-removal rate.
struct EditorModel {
  std::array<double, kTrainableEditKinds> logits{};
  double side_effect_rate = 0.0;

  static EditorModel WithSuccess(double probability, double side_effect_rate);

  /// logistic(logit); Noop always succeeds.
  double SuccessProbability(EditKind kind) const;
  void Validate() const;

  friend bool operator==(EditorModel const&, EditorModel const&) = default;
};

double Logistic(double x);
double Logit(double p);

WorldState Generate(RequirementSet const& reqs, GenSpec const& spec,
                    std::uint64_t seed,
                    Vocabulary const& vocabulary = Vocabulary::Builtin());

/// Rebuilds the state from a recorded trace instead of a seed.
WorldState ReplayGenerate(RequirementSet const& reqs, GenSpec const& spec,
                          std::span<std::uint64_t const> trace,
                          Vocabulary const& vocabulary = Vocabulary::Builtin());

struct EditOutcome {
  WorldState state;
  bool applied = false;  // the action's own effect took place
  std::optional<Triplet> collateral;  // triplet removed as a side effect
};

/// Applies `action` with probability SuccessProbability(kind), then with
/// probability side_effect_rate removes one uniformly chosen triplet that is
/// neither the action's target nor a witness of a `mentioned` relation.
/// Noop consumes no draws and only advances step_index.
EditOutcome ApplyEditDetailed(WorldState const& state, EditAction const& action,
                              EditorModel const& editor, std::uint64_t seed,
                              std::span<Requirement const> mentioned = {});

WorldState ApplyEdit(WorldState const& state, EditAction const& action,
                     EditorModel const& editor, std::uint64_t seed,
                     std::span<Requirement const> mentioned = {});

/// Replays an edit from the trace segment appended by the original call.
EditOutcome ReplayEdit(WorldState const& state, EditAction const& action,
                       EditorModel const& editor,
                       std::span<std::uint64_t const> trace,
                       std::span<Requirement const> mentioned = {});

/// Per-requirement exact satisfaction, descriptions by tag membership.
std::vector<bool> OracleVerdict(WorldState const& state,
                                RequirementSet const& reqs);

/// Fraction satisfied. Throws kEmptyRequirements.
double OracleCheck(WorldState const& state, RequirementSet const& reqs);

/// Stable hex hash of the canonical graph document plus tags.
std::string Fingerprint(WorldState const& state);

nlohmann::json ToJson(GenSpec const& spec);
GenSpec GenSpecFromJson(nlohmann::json const& j);
nlohmann::json ToJson(EditorModel const& editor);
EditorModel EditorModelFromJson(nlohmann::json const& j);

}  // namespace gre

#endif  // GRE_SIMWORLD_H_
