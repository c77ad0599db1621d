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

#include "gre/experiments.h"

#include "gre/backends.h"
#include "gre/random.h"

namespace gre {

std::uint64_t StreamSeed(std::uint64_t global, SeedStream stream) {
  return DeriveSeed(global, {static_cast<std::uint64_t>(stream)});
}

std::vector<BatchItem> RepeatCorpus(std::vector<BatchItem> const& corpus,
                                    int repeats) {
  std::vector<BatchItem> out;
  out.reserve(corpus.size() * static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    for (auto const& item : corpus) {
      out.push_back({item.id + "#" + std::to_string(r), item.reqs});
    }
  }
  return out;
}

BatchResult EvaluateSim(RunConfig const& config, ActorPolicy const& actor,
                        EditorModel const& editor, EpisodeConfig episode,
                        int repeats, int parallelism) {
  auto backends = MakeSimBackends(config.genspec, editor, actor);
  auto items = RepeatCorpus(config.corpus, repeats);
  episode.seed = StreamSeed(config.seed, SeedStream::kEpisodes);
  return RunBatch(backends, items, episode, parallelism);
}

std::vector<TrainingItem> TrainingPool(RunConfig const& config) {
  return BuildTrainingPool(AsTrainingCorpus(config.corpus), config.genspec,
                           StreamSeed(config.seed, SeedStream::kPool),
                           config.pool_size);
}

std::vector<TraceRecord> TrainActor(RunConfig const& config,
                                    ActorPolicy& actor,
                                    CheckpointHook const& hook) {
  auto pool = TrainingPool(config);
  GrpoConfig grpo = config.phase1;
  grpo.seed = StreamSeed(config.seed, SeedStream::kPhase1);
  return TrainPhase1(pool, actor, config.editor, grpo, hook);
}

std::vector<TraceRecord> TrainEditor(RunConfig const& config,
                                     ActorPolicy const& actor,
                                     EditorModel& editor,
                                     CheckpointHook const& hook) {
  auto pool = TrainingPool(config);
  GrpoConfig grpo = config.phase2;
  grpo.seed = StreamSeed(config.seed, SeedStream::kPhase2);
  return TrainPhase2(pool, actor, editor, grpo, hook);
}

double FixMass(ActorPolicy const& actor, std::span<TrainingItem const> pool) {
  if (pool.empty()) return 0;
  double total = 0;
  for (auto const& item : pool) {
    auto dist = MakeDistribution(actor, item.state, item.reqs);
    for (std::size_t a = 0; a < dist.support.size(); ++a) {
      if (dist.features[a][5] > 0) total += dist.probabilities[a];
    }
  }
  return total / static_cast<double>(pool.size());
}

}  // namespace gre
