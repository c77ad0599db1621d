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

#ifndef GRE_POLICY_H_
#define GRE_POLICY_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gre/random.h"
#include "gre/requirements.h"
#include "gre/simworld.h"

namespace gre {

/// Feature layout, in order:
///   [0..4] one-hot action kind (add_triplet, remove_triplet, add_entity,
///          add_tag, noop)
///   [5]    1 if the action fixes a currently unsatisfied requirement
///   [6]    deficit count (unsatisfied requirements) if the action is Noop
///   [7]    step_index if the action is Noop
/// The state-level quantities are gated by the Noop indicator because a
/// feature shared by every candidate cancels in the softmax.
inline constexpr std::size_t kFeatureCount = 8;
using FeatureVector = std::array<double, kFeatureCount>;

/// Identifier of the layout above, stored in checkpoints.
std::string_view FeatureBasisFingerprint();

/// Linear-softmax actor: pi(a|s) ∝ exp(<weights, f(s,a)> / temperature).
struct ActorPolicy {
  std::vector<double> weights = std::vector<double>(kFeatureCount, 0.0);
  double temperature = 1.0;

  /// Zero weights except a bias on the Noop indicator.
  static ActorPolicy WithNoopBias(double bias);

  void Validate() const;

  friend bool operator==(ActorPolicy const&, ActorPolicy const&) = default;
};

struct ActionDistribution {
  std::vector<EditAction> support;
  std::vector<FeatureVector> features;
  std::vector<double> probabilities;
  std::vector<double> log_probabilities;

  /// Index of `action` in the support; throws kActionNotInSupport.
  std::size_t IndexOf(EditAction const& action) const;
};

/// One fix per unsatisfied requirement (prompt order, duplicates dropped),
/// one RemoveTriplet per distractor triplet (triplets witnessing no
/// relation requirement, canonical order), then Noop.
std::vector<EditAction> CandidateActions(WorldState const& state,
                                         RequirementSet const& reqs);

FeatureVector Featurize(WorldState const& state, RequirementSet const& reqs,
                        EditAction const& action);

ActionDistribution MakeDistribution(ActorPolicy const& policy,
                                    WorldState const& state,
                                    RequirementSet const& reqs);

double LogProb(ActorPolicy const& policy, WorldState const& state,
               RequirementSet const& reqs, EditAction const& action);

/// d log pi(action) / d weights = (f(a) - E_pi[f]) / temperature.
std::vector<double> GradLogProb(ActorPolicy const& policy,
                                WorldState const& state,
                                RequirementSet const& reqs,
                                EditAction const& action);

/// KL(p || q) over a shared support. Throws kSupportMismatch.
double ExactKl(ActionDistribution const& p, ActionDistribution const& q);

double ExactKl(ActorPolicy const& policy, ActorPolicy const& reference,
               WorldState const& state, RequirementSet const& reqs);

/// Gradient of ExactKl with respect to `policy.weights`.
std::vector<double> GradExactKl(ActorPolicy const& policy,
                                ActorPolicy const& reference,
                                WorldState const& state,
                                RequirementSet const& reqs);

ActorPolicy SnapshotReference(ActorPolicy const& policy);

std::size_t SampleIndex(ActionDistribution const& dist, DrawSource& draws);

EditAction SampleAction(ActorPolicy const& policy, WorldState const& state,
                        RequirementSet const& reqs, std::uint64_t seed);

/// Versioned JSON checkpoint carrying the feature-basis fingerprint.
std::string SaveCheckpoint(ActorPolicy const& policy);

/// Throws kCheckpointMismatch on a fingerprint or version mismatch and
/// kMalformedDocument on unreadable input.
ActorPolicy LoadCheckpoint(std::string_view text);

std::string SaveEditorCheckpoint(EditorModel const& editor);
EditorModel LoadEditorCheckpoint(std::string_view text);

}  // namespace gre

#endif  // GRE_POLICY_H_
