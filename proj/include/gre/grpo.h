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

#ifndef GRE_GRPO_H_
#define GRE_GRPO_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gre/policy.h"
#include "gre/requirements.h"
#include "gre/simworld.h"

namespace gre {

struct GrpoConfig {
  int group_size = 8;
  double clip_epsilon = 0.2;
  double kl_coefficient = 0.04;
  double learning_rate = 0.05;
  int steps = 1000;
  std::uint64_t seed = 0;
  double sigma_floor = 1e-6;
  // Steps between reference snapshots; 0 keeps the phase-start snapshot.
  int reference_refresh = 0;
  // Steps between checkpoint hooks; 0 disables them.
  int checkpoint_interval = 0;

  void Validate() const;
};

nlohmann::json ToJson(GrpoConfig const& config);
GrpoConfig GrpoConfigFromJson(nlohmann::json const& j,
                              GrpoConfig base = GrpoConfig());

struct RolloutEntry {
  std::uint64_t seed = 0;
  EditAction action = EditAction::Noop();
  WorldState next_state;
  bool applied = false;
  double reward = 0;
  double log_prob_live = 0;
  double log_prob_ref = 0;
};

struct RolloutGroup {
  WorldState state;
  std::vector<RolloutEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::vector<double> Rewards() const;
  double MeanReward() const;
};

/// (r - mean) / population std; all zeros when the std is below the floor.
/// Throws kGroupTooSmall for fewer than two rewards.
std::vector<double> ComputeAdvantages(std::span<double const> rewards,
                                      double sigma_floor);

/// min(rho * adv, clip(rho, 1 - eps, 1 + eps) * adv).
double SurrogateTerm(double ratio, double advantage, double epsilon);

struct LossResult {
  double objective = 0;  // surrogate - beta * kl; maximized
  double surrogate = 0;
  double kl = 0;
  std::vector<double> gradient;
};

/// Phase-1 objective over the actor weights. Log-probabilities are
/// recomputed from `policy` and `reference`.
LossResult GrpoLoss(RolloutGroup const& group, RequirementSet const& reqs,
                    ActorPolicy const& policy, ActorPolicy const& reference,
                    GrpoConfig const& config);

/// Phase-2 objective over the editor success logits, using the
/// log-probability of each entry's realized success/failure.
LossResult GrpoLoss(RolloutGroup const& group, EditorModel const& editor,
                    EditorModel const& reference, GrpoConfig const& config);

/// log P(outcome) under the editor; zero for Noop.
double EditorLogProb(EditorModel const& editor, EditKind kind, bool applied);

/// G actions sampled from `policy`, entry i seeded with seed + i.
/// Throws kStateAlreadyPassing.
RolloutGroup CollectGroupPhase1(ActorPolicy const& policy,
                                ActorPolicy const& reference,
                                EditorModel const& editor,
                                RequirementSet const& reqs,
                                WorldState const& state,
                                GrpoConfig const& config, std::uint64_t seed);

/// One action from the frozen policy, G editor outcomes.
RolloutGroup CollectGroupPhase2(ActorPolicy const& policy,
                                EditorModel const& editor,
                                EditorModel const& reference,
                                RequirementSet const& reqs,
                                WorldState const& state,
                                GrpoConfig const& config, std::uint64_t seed);

struct TrainingItem {
  std::string id;
  RequirementSet reqs;
  WorldState state;
};

/// Failing initial states drawn round-robin from the corpus.
std::vector<TrainingItem> BuildTrainingPool(
    std::vector<std::pair<std::string, RequirementSet>> const& corpus,
    GenSpec const& spec, std::uint64_t seed, std::size_t size);

struct TraceRecord {
  int step = 0;
  int phase = 1;
  double mean_reward = 0;
  double kl = 0;
  double loss = 0;
  std::string checkpoint_ref;
};

std::string TraceRecordLine(TraceRecord const& record);

/// Called every checkpoint_interval steps (after the update); returns the
/// reference recorded in the trace.
using CheckpointHook = std::function<std::string(int step)>;

/// Step s trains on pool[s mod pool size].
std::vector<TraceRecord> TrainPhase1(std::span<TrainingItem const> pool,
                                     ActorPolicy& policy,
                                     EditorModel const& editor,
                                     GrpoConfig const& config,
                                     CheckpointHook const& hook = {});

std::vector<TraceRecord> TrainPhase2(std::span<TrainingItem const> pool,
                                     ActorPolicy const& policy,
                                     EditorModel& editor,
                                     GrpoConfig const& config,
                                     CheckpointHook const& hook = {});

/// Mean reward over records [begin, begin + width).
double WindowMean(std::span<TraceRecord const> trace, std::size_t begin,
                  std::size_t width);

}  // namespace gre

#endif  // GRE_GRPO_H_
