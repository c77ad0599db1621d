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

#ifndef GRE_EXPERIMENTS_H_
#define GRE_EXPERIMENTS_H_

#include <cstdint>
#include <vector>

#include "gre/config.h"
#include "gre/grpo.h"
#include "gre/orchestrator.h"

namespace gre {

/// Seed streams below the global seed.
enum class SeedStream : std::uint64_t {
  kEpisodes = 1,
  kPhase1 = 2,
  kPhase2 = 3,
  kPool = 4,
};

std::uint64_t StreamSeed(std::uint64_t global, SeedStream stream);

/// `repeats` copies of the corpus, ids suffixed "#r", in corpus order.
std::vector<BatchItem> RepeatCorpus(std::vector<BatchItem> const& corpus,
                                    int repeats);

/// Episodes over the repeated corpus on simulator backends.
BatchResult EvaluateSim(RunConfig const& config, ActorPolicy const& actor,
                        EditorModel const& editor, EpisodeConfig episode,
                        int repeats, int parallelism);

std::vector<TrainingItem> TrainingPool(RunConfig const& config);

std::vector<TraceRecord> TrainActor(RunConfig const& config,
                                    ActorPolicy& actor,
                                    CheckpointHook const& hook = {});

std::vector<TraceRecord> TrainEditor(RunConfig const& config,
                                     ActorPolicy const& actor,
                                     EditorModel& editor,
                                     CheckpointHook const& hook = {});

/// Probability the policy puts on oracle-best actions (fixes of unsatisfied
/// requirements), averaged over the pool states.
double FixMass(ActorPolicy const& actor, std::span<TrainingItem const> pool);

}  // namespace gre

#endif  // GRE_EXPERIMENTS_H_
