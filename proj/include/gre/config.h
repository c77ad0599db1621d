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

#ifndef GRE_CONFIG_H_
#define GRE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gre/grpo.h"
#include "gre/metrics.h"
#include "gre/orchestrator.h"
#include "gre/policy.h"
#include "gre/remote.h"
#include "gre/simworld.h"

namespace gre {

/// Everything a command needs. Loaded from one JSON file; command-line
/// flags are applied on top and the merged result is written next to the
/// outputs.
struct RunConfig {
  std::uint64_t seed = 0;
  GenSpec genspec;
  EditorModel editor = EditorModel::WithSuccess(0.75, 0.1);
  double noop_bias = 3.0;
  double temperature = 1.0;
  EpisodeConfig episode;
  GrpoConfig phase1;
  GrpoConfig phase2;
  std::size_t pool_size = 100;
  std::string backend = "sim";
  RemoteEndpoints endpoints;
  std::vector<BatchItem> corpus;
  std::string corpus_path;  // where `corpus` came from, if a file
  std::string out = "out";
  int parallelism = 0;      // 0: hardware concurrency

  /// Untrained actor: zero weights plus the Noop bias.
  ActorPolicy InitialActor() const;
  int EffectiveParallelism() const;
  void Validate() const;
  /// Result-relevant settings only (no output path or thread count).
  nlohmann::ordered_json ToJson() const;

  /// Relative corpus paths resolve against `base_dir`.
  static RunConfig FromJson(nlohmann::json const& j,
                            std::filesystem::path const& base_dir = {});
  static RunConfig Load(std::filesystem::path const& path);
};

/// Accepts a list of {"id", "prompt"} objects, or an object holding such a
/// list under "corpus".
std::vector<BatchItem> CorpusFromJson(nlohmann::json const& j);
std::vector<BatchItem> LoadCorpus(std::filesystem::path const& path);

/// Metric-evaluation corpus: {"pairs": [{"id", "prompt", "reference",
/// "candidate", "tags"}]} where reference/candidate are extraction
/// documents and tags decide the candidate's description requirements.
struct NamedPair {
  std::string id;
  EvaluationPair pair;
};
std::vector<NamedPair> EvalCorpusFromJson(nlohmann::json const& j);
std::vector<NamedPair> LoadEvalCorpus(std::filesystem::path const& path);

std::vector<std::pair<std::string, RequirementSet>> AsTrainingCorpus(
    std::vector<BatchItem> const& items);

std::string ReadFile(std::filesystem::path const& path);
void WriteFile(std::filesystem::path const& path, std::string_view content);

}  // namespace gre

#endif  // GRE_CONFIG_H_
