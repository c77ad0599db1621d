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

#include "gre/orchestrator.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <thread>

#include "gre/error.h"
#include "gre/extraction.h"
#include "gre/random.h"

namespace gre {
namespace {

constexpr std::uint64_t kActorStream = 1;
constexpr std::uint64_t kEditorStream = 2;

std::string Hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void Record(TrajectoryLog& log, int attempt, int step, std::string phase,
            std::uint64_t seed, std::string event, Observation const& obs,
            CheckerVerdict const& verdict) {
  LogRecord r;
  r.attempt = attempt;
  r.step = step;
  r.phase = std::move(phase);
  r.seed = seed;
  r.event = std::move(event);
  r.score = verdict.Score();
  r.satisfied = verdict.satisfied_count;
  r.total = verdict.total;
  r.verdict = verdict.per_requirement;
  r.fingerprint = StateFingerprint(obs);
  r.retries = obs.retries + verdict.retries;
  if (verdict.clamped) r.warning = "checker count clamped";
  log.Append(std::move(r));
}

EditPayload ProposeEdit(Backends const& b, EpisodeMode mode,
                        Observation const& obs, RequirementSet const& reqs,
                        CheckerVerdict const& verdict, std::uint64_t seed) {
  EditPayload payload;
  switch (mode) {
    case EpisodeMode::kFull:
      return b.actor->Propose(obs, reqs, verdict, seed);
    case EpisodeMode::kNoActorSamePrompt:
      payload.mentioned = reqs.items;
      break;
    case EpisodeMode::kNoActorUnsatisfiedOnly:
      if (verdict.per_requirement.size() != reqs.size()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "unsatisfied-only mode needs a per-requirement checker");
      }
      for (std::size_t i = 0; i < reqs.size(); ++i) {
        if (!verdict.per_requirement[i]) {
          payload.mentioned.push_back(reqs.items[i]);
        }
      }
      break;
    case EpisodeMode::kPassAtK:
      throw Error(ErrorCode::kInvalidArgument, "pass@k does not edit");
  }
  for (auto const& r : payload.mentioned) {
    if (!payload.text.empty()) payload.text += ", ";
    payload.text += r.Text();
  }
  return payload;
}

EpisodeResult RunPassAtK(Backends const& b, RequirementSet const& reqs,
                         EpisodeConfig const& config) {
  EpisodeResult result;
  double best = -1;
  for (int i = 0; i < config.k; ++i) {
    std::uint64_t const seed =
        DeriveSeed(config.seed, {static_cast<std::uint64_t>(i)});
    auto obs = b.generator->Generate(reqs, seed);
    auto verdict = b.checker->Check(obs, reqs);
    Record(result.log, i, 0, "generate", seed, "generate", obs, verdict);
    if (verdict.Score() > best) {  // ties keep the lowest index
      best = verdict.Score();
      result.final_state = std::move(obs);
    }
  }
  result.final_score = best;
  result.best_score = result.log.MaxScore();
  result.status =
      best >= 1.0 ? EpisodeStatus::kPassed : EpisodeStatus::kExhausted;
  return result;
}

EpisodeResult RunLoop(Backends const& b, RequirementSet const& reqs,
                      EpisodeConfig const& config) {
  EpisodeResult result;
  std::optional<Observation> first;
  double first_score = 0;
  std::optional<Observation> best;
  double best_score = -1;

  for (int attempt = 0; attempt <= config.max_restarts; ++attempt) {
    std::uint64_t const attempt_seed =
        DeriveSeed(config.seed, {static_cast<std::uint64_t>(attempt)});
    result.restarts_used = attempt;
    result.edits_used = 0;

    auto obs = b.generator->Generate(reqs, attempt_seed);
    auto verdict = b.checker->Check(obs, reqs);
    Record(result.log, attempt, 0, "generate", attempt_seed, "generate", obs,
           verdict);
    if (!first) {
      first = obs;
      first_score = verdict.Score();
    }
    if (verdict.Score() > best_score) {
      best_score = verdict.Score();
      best = obs;
    }

    for (int e = 0; verdict.satisfied_count < verdict.total; ++e) {
      if (e >= config.max_edits) break;
      auto payload = ProposeEdit(
          b, config.mode, obs, reqs, verdict,
          DeriveSeed(attempt_seed, {kActorStream, static_cast<std::uint64_t>(e)}));
      if (payload.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "actor returned no edit");
      }
      // Identical guidance on an identical state reproduces the same edit.
      std::uint64_t const edit_seed =
          DeriveSeed(attempt_seed, {kEditorStream,
                                    HashString(StateFingerprint(obs)),
                                    HashString(payload.text)});
      obs = b.editor->Edit(obs, payload, edit_seed);
      verdict = b.checker->Check(obs, reqs);
      ++result.edits_used;
      ++result.total_edits;
      Record(result.log, attempt, e + 1, "edit", edit_seed, payload.text, obs,
             verdict);
      if (verdict.Score() > best_score) {
        best_score = verdict.Score();
        best = obs;
      }
    }
    if (verdict.satisfied_count >= verdict.total) {
      result.status = EpisodeStatus::kPassed;
      result.final_state = std::move(obs);
      result.final_score = verdict.Score();
      result.best_score = result.log.MaxScore();
      return result;
    }
  }

  result.status = EpisodeStatus::kExhausted;
  if (config.return_best_on_exhaustion) {
    result.final_state = std::move(*best);
    result.final_score = best_score;
  } else {
    result.final_state = std::move(*first);
    result.final_score = first_score;
  }
  result.best_score = result.log.MaxScore();
  return result;
}

double Mean(std::vector<double> const& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

void EpisodeConfig::Validate() const {
  if (max_edits < 0) throw Error(ErrorCode::kInvalidConfig, "max_edits < 0");
  if (max_restarts < 0) {
    throw Error(ErrorCode::kInvalidConfig, "max_restarts < 0");
  }
  if (mode == EpisodeMode::kPassAtK && k < 1) {
    throw Error(ErrorCode::kInvalidConfig, "pass@k needs k >= 1");
  }
}

std::string ModeName(EpisodeMode mode, int k) {
  switch (mode) {
    case EpisodeMode::kFull: return "full";
    case EpisodeMode::kNoActorSamePrompt: return "same_prompt";
    case EpisodeMode::kNoActorUnsatisfiedOnly: return "unsatisfied_only";
    case EpisodeMode::kPassAtK: return "pass@" + std::to_string(k);
  }
  return "unknown";
}

EpisodeMode ParseMode(std::string_view name, int& k) {
  if (name == "full") return EpisodeMode::kFull;
  if (name == "same_prompt") return EpisodeMode::kNoActorSamePrompt;
  if (name == "unsatisfied_only") return EpisodeMode::kNoActorUnsatisfiedOnly;
  constexpr std::string_view kPass = "pass@";
  if (name.starts_with(kPass)) {
    auto digits = name.substr(kPass.size());
    int value = 0;
    auto [end, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec == std::errc() && end == digits.data() + digits.size() &&
        value >= 1) {
      k = value;
      return EpisodeMode::kPassAtK;
    }
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown mode '" + std::string(name) +
                  "' (expected full, same_prompt, unsatisfied_only, pass@K)");
}

nlohmann::json ToJson(EpisodeConfig const& c) {
  return {{"max_edits", c.max_edits},
          {"max_restarts", c.max_restarts},
          {"mode", ModeName(c.mode, c.k)},
          {"k", c.k},
          {"seed", c.seed},
          {"return_best_on_exhaustion", c.return_best_on_exhaustion}};
}

EpisodeConfig EpisodeConfigFromJson(nlohmann::json const& j, EpisodeConfig c) {
  try {
    c.max_edits = j.value("max_edits", c.max_edits);
    c.max_restarts = j.value("max_restarts", c.max_restarts);
    c.k = j.value("k", c.k);
    if (j.contains("mode")) {
      c.mode = ParseMode(j["mode"].get<std::string>(), c.k);
    }
    c.seed = j.value("seed", c.seed);
    c.return_best_on_exhaustion =
        j.value("return_best_on_exhaustion", c.return_best_on_exhaustion);
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("episode: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string_view StatusName(EpisodeStatus status) {
  return status == EpisodeStatus::kPassed ? "passed" : "exhausted";
}

int TrajectoryLog::EditCount(int attempt) const {
  return static_cast<int>(std::count_if(
      records_.begin(), records_.end(), [&](LogRecord const& r) {
        return r.attempt == attempt && r.phase == "edit";
      }));
}

int TrajectoryLog::GenerationCount() const {
  return static_cast<int>(
      std::count_if(records_.begin(), records_.end(),
                    [](LogRecord const& r) { return r.phase == "generate"; }));
}

double TrajectoryLog::MaxScore() const {
  double best = 0;
  for (auto const& r : records_) best = std::max(best, r.score);
  return best;
}

std::string TrajectoryLog::ToJsonl(std::string_view episode) const {
  std::string out;
  for (auto const& r : records_) {
    nlohmann::ordered_json j;
    j["schema"] = kTrajectorySchemaVersion;
    j["episode"] = episode;
    j["attempt"] = r.attempt;
    j["step"] = r.step;
    j["phase"] = r.phase;
    j["seed"] = r.seed;
    j["event"] = r.event;
    j["score"] = r.score;
    j["satisfied"] = r.satisfied;
    j["total"] = r.total;
    j["verdict"] = r.verdict.size() == static_cast<std::size_t>(r.total)
                       ? nlohmann::ordered_json(r.verdict)
                       : nlohmann::ordered_json(nullptr);
    j["fingerprint"] = r.fingerprint;
    j["retries"] = r.retries;
    j["warning"] = r.warning;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string StateFingerprint(Observation const& obs) {
  if (obs.world) return Fingerprint(*obs.world);
  return Hex16(HashString(RenderExtractionDocument(obs.graph)));
}

EpisodeResult RunEpisode(Backends const& backends, RequirementSet const& reqs,
                         EpisodeConfig const& config) {
  config.Validate();
  if (reqs.items.empty()) {
    throw Error(ErrorCode::kEmptyRequirements, "episode without requirements");
  }
  if (config.mode == EpisodeMode::kPassAtK) {
    return RunPassAtK(backends, reqs, config);
  }
  return RunLoop(backends, reqs, config);
}

EpisodeResult RunAblation(Backends const& backends, RequirementSet const& reqs,
                          EpisodeConfig const& config) {
  return RunEpisode(backends, reqs, config);
}

nlohmann::ordered_json BatchSummary::ToJson() const {
  nlohmann::ordered_json j;
  j["episodes"] = episodes;
  j["passed"] = passed;
  j["failed"] = failed;
  j["pass_rate"] = pass_rate;
  j["mean_score"] = mean_score;
  j["mean_best_score"] = mean_best_score;
  j["mean_edits"] = mean_edits;
  j["mean_restarts"] = mean_restarts;
  j["sg_iou"] = metrics.sg_iou;
  j["ent_iou"] = metrics.ent_iou;
  j["rel_iou"] = metrics.rel_iou;
  j["checker_mean"] = metrics.checker_score;
  return j;
}

std::uint64_t ItemSeed(std::uint64_t seed, std::string_view id) {
  return DeriveSeed(seed, {HashString(id)});
}

BatchResult RunBatch(Backends const& backends, std::span<BatchItem const> items,
                     EpisodeConfig const& config, int parallelism) {
  config.Validate();
  if (items.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty corpus");
  BatchResult batch;
  batch.outcomes.resize(items.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      auto& out = batch.outcomes[i];
      out.id = items[i].id;
      EpisodeConfig item_config = config;
      item_config.seed = ItemSeed(config.seed, items[i].id);
      try {
        out.result = RunEpisode(backends, items[i].reqs, item_config);
      } catch (Error const& e) {
        out.error = e.what();
      } catch (std::exception const& e) {
        out.error = e.what();
      }
    }
  };
  int const workers = std::clamp<int>(parallelism, 1,
                                      static_cast<int>(items.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  auto& s = batch.summary;
  std::vector<double> scores, bests, edits, restarts;
  std::vector<MetricReport> reports;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto const& out = batch.outcomes[i];
    ++s.episodes;
    if (!out.result) {
      ++s.failed;
      continue;
    }
    auto const& r = *out.result;
    if (r.status == EpisodeStatus::kPassed) ++s.passed;
    scores.push_back(r.final_score);
    bests.push_back(r.best_score);
    edits.push_back(r.total_edits);
    restarts.push_back(r.restarts_used);

    EvaluationPair pair{RequirementGraph(items[i].reqs), r.final_state.graph,
                        items[i].reqs, {}};
    auto report = EvaluatePair(pair);
    // The checker's own verdict stands in for the description judge.
    report.checker_score = r.final_score;
    report.counts.satisfied = static_cast<std::size_t>(
        r.final_score * static_cast<double>(items[i].reqs.size()) + 0.5);
    reports.push_back(report);
  }
  s.pass_rate = static_cast<double>(s.passed) / s.episodes;
  s.mean_score = Mean(scores);
  s.mean_best_score = Mean(bests);
  s.mean_edits = Mean(edits);
  s.mean_restarts = Mean(restarts);
  if (!reports.empty()) s.metrics = MeanReport(reports);
  return batch;
}

std::string BatchLogs(BatchResult const& batch) {
  std::string out;
  for (auto const& o : batch.outcomes) {
    if (o.result) out += o.result->log.ToJsonl(o.id);
  }
  return out;
}

}  // namespace gre
