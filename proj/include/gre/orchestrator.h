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

#ifndef GRE_ORCHESTRATOR_H_
#define GRE_ORCHESTRATOR_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gre/backends.h"
#include "gre/metrics.h"
#include "gre/requirements.h"

namespace gre {

enum class EpisodeMode {
  kFull,
  kNoActorSamePrompt,
  kNoActorUnsatisfiedOnly,
  kPassAtK,
};

struct EpisodeConfig {
  int max_edits = 10;
  int max_restarts = 3;
  EpisodeMode mode = EpisodeMode::kFull;
  int k = 10;  // PassAtK only
  std::uint64_t seed = 0;
  // Off: an exhausted episode returns its first generation unchanged.
  bool return_best_on_exhaustion = false;

  void Validate() const;
};

/// "full", "same_prompt", "unsatisfied_only", "pass@K".
std::string ModeName(EpisodeMode mode, int k);
/// Inverse of ModeName; returns the mode and sets `k` for pass@K.
EpisodeMode ParseMode(std::string_view name, int& k);

nlohmann::json ToJson(EpisodeConfig const& config);
EpisodeConfig EpisodeConfigFromJson(nlohmann::json const& j,
                                    EpisodeConfig base = {});

enum class EpisodeStatus { kPassed, kExhausted };
std::string_view StatusName(EpisodeStatus status);

inline constexpr int kTrajectorySchemaVersion = 1;

struct LogRecord {
  int attempt = 0;
  int step = 0;                // edits applied so far within the attempt
  std::string phase;           // "generate" or "edit"
  std::uint64_t seed = 0;
  std::string event;           // "generate" or the edit prompt
  double score = 0;
  int satisfied = 0;
  int total = 0;
  std::vector<bool> verdict;   // empty when the checker gives a count only
  std::string fingerprint;
  int retries = 0;
  std::string warning;
};

class TrajectoryLog {
 public:
  void Append(LogRecord record) { records_.push_back(std::move(record)); }
  std::vector<LogRecord> const& records() const { return records_; }

  int EditCount(int attempt) const;
  int GenerationCount() const;
  double MaxScore() const;

  /// One JSON object per line, tagged with `episode`.
  std::string ToJsonl(std::string_view episode) const;

 private:
  std::vector<LogRecord> records_;
};

struct EpisodeResult {
  EpisodeStatus status = EpisodeStatus::kExhausted;
  Observation final_state;
  double final_score = 0;  // checker score of final_state
  double best_score = 0;   // max over every logged check
  int edits_used = 0;      // in the last attempt
  int total_edits = 0;     // across attempts
  int restarts_used = 0;
  TrajectoryLog log;
};

/// Stable hash of the canonical extraction document (plus description
/// tags for simulator states).
std::string StateFingerprint(Observation const& obs);

/// Dispatches on config.mode; PassAtK never edits.
EpisodeResult RunEpisode(Backends const& backends, RequirementSet const& reqs,
                         EpisodeConfig const& config);

EpisodeResult RunAblation(Backends const& backends, RequirementSet const& reqs,
                          EpisodeConfig const& config);

struct BatchItem {
  std::string id;
  RequirementSet reqs;
};

struct BatchOutcome {
  std::string id;
  std::optional<EpisodeResult> result;
  std::string error;  // set when the episode failed
};

struct BatchSummary {
  int episodes = 0;
  int passed = 0;
  int failed = 0;
  double pass_rate = 0;
  double mean_score = 0;
  double mean_best_score = 0;
  double mean_edits = 0;
  double mean_restarts = 0;
  MetricReport metrics;

  nlohmann::ordered_json ToJson() const;
};

struct BatchResult {
  std::vector<BatchOutcome> outcomes;  // in corpus order
  BatchSummary summary;
};

/// Per-item seed: derived from (config.seed, hash of id), so results do not
/// depend on corpus order or the degree of parallelism.
std::uint64_t ItemSeed(std::uint64_t seed, std::string_view id);

BatchResult RunBatch(Backends const& backends, std::span<BatchItem const> items,
                     EpisodeConfig const& config, int parallelism);

/// Concatenated trajectory logs in corpus order.
std::string BatchLogs(BatchResult const& batch);

}  // namespace gre

#endif  // GRE_ORCHESTRATOR_H_
