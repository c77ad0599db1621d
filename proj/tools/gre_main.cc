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

// gre: evaluate scene-graph metrics, run Generate-Reflect-Edit episodes,
// train the actor/editor, and compare ablation modes.
//
// Exit status: 0 on success, 2 if some episodes failed, 1 on configuration
// or input errors.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gre/config.h"
#include "gre/error.h"
#include "gre/experiments.h"
#include "gre/metrics.h"
#include "gre/orchestrator.h"
#include "gre/policy.h"
#include "gre/remote.h"

namespace fs = std::filesystem;
using gre::Error;
using gre::ErrorCode;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallelism;
  std::string corpus;
  std::string out;
  std::vector<std::string> modes;
  int phase = 0;
  std::string checkpoint;
  std::string editor_checkpoint;
  bool from_init = false;
  int eval_repeats = 5;
  std::string backend;
  std::string endpoint_generator, endpoint_editor, endpoint_checker,
      endpoint_actor, endpoint_token;
  std::optional<int> endpoint_timeout_ms;
  std::optional<int> endpoint_retries;
  std::string input;
};

void AddCommon(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "global seed (overrides the config)");
  cmd->add_option("--parallelism", f.parallelism,
                  "worker threads (default: all cores)");
  cmd->add_option("--corpus", f.corpus, "corpus file (overrides the config)");
  cmd->add_option("--out", f.out, "output directory");
}

void AddBackend(CLI::App* cmd, Flags& f) {
  cmd->add_option("--backend", f.backend, "sim or remote")
      ->check(CLI::IsMember({"sim", "remote"}));
  cmd->add_option("--endpoint-generator", f.endpoint_generator,
                  "generator base URL");
  cmd->add_option("--endpoint-editor", f.endpoint_editor,
                  "editor base URL");
  cmd->add_option("--endpoint-checker", f.endpoint_checker,
                  "checker base URL");
  cmd->add_option("--endpoint-actor", f.endpoint_actor,
                  "actor base URL");
  cmd->add_option("--endpoint-timeout-ms", f.endpoint_timeout_ms,
                  "per-request timeout for every endpoint");
  cmd->add_option("--endpoint-retries", f.endpoint_retries,
                  "retries after a transient failure");
  cmd->add_option("--endpoint-token", f.endpoint_token,
                  "bearer token sent to every endpoint");
}

gre::RunConfig Resolve(Flags const& f) {
  gre::RunConfig c = f.config.empty() ? gre::RunConfig()
                                      : gre::RunConfig::Load(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.parallelism) c.parallelism = *f.parallelism;
  if (!f.corpus.empty()) {
    c.corpus = gre::LoadCorpus(f.corpus);
    c.corpus_path = f.corpus;
  }
  if (!f.out.empty()) c.out = f.out;
  if (!f.backend.empty()) c.backend = f.backend;
  auto endpoint = [&](std::string const& url, gre::BackendEndpoint& e) {
    if (!url.empty()) e.base_url = url;
    if (f.endpoint_timeout_ms) {
      e.timeout = std::chrono::milliseconds(*f.endpoint_timeout_ms);
    }
    if (f.endpoint_retries) e.max_retries = *f.endpoint_retries;
    if (!f.endpoint_token.empty()) e.bearer_token = f.endpoint_token;
  };
  endpoint(f.endpoint_generator, c.endpoints.generator);
  endpoint(f.endpoint_editor, c.endpoints.editor);
  endpoint(f.endpoint_checker, c.endpoints.checker);
  endpoint(f.endpoint_actor, c.endpoints.actor);
  c.Validate();
  return c;
}

void Persist(gre::RunConfig const& c) {
  gre::WriteFile(fs::path(c.out) / "effective_config.json",
                 c.ToJson().dump(2) + "\n");
}

gre::ActorPolicy LoadActor(gre::RunConfig const& c, std::string const& path) {
  if (path.empty()) return c.InitialActor();
  return gre::LoadCheckpoint(gre::ReadFile(path));
}

gre::EditorModel LoadEditor(gre::RunConfig const& c, std::string const& path) {
  if (path.empty()) return c.editor;
  return gre::LoadEditorCheckpoint(gre::ReadFile(path));
}

gre::Backends MakeBackends(gre::RunConfig const& c,
                           gre::ActorPolicy const& actor,
                           gre::EditorModel const& editor) {
  if (c.backend == "remote") {
    return gre::MakeRemoteBackends(c.endpoints);
  }
  return gre::MakeSimBackends(c.genspec, editor, actor);
}

void RequireCorpus(gre::RunConfig const& c) {
  if (c.corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus,
                "no corpus: pass --corpus or set \"corpus\" in the config");
  }
}

void PrintSummary(std::string const& label, gre::BatchSummary const& s) {
  std::printf(
      "%s: episodes=%d passed=%d failed=%d pass_rate=%.4f mean_score=%.4f "
      "mean_edits=%.3f mean_restarts=%.3f\n",
      label.c_str(), s.episodes, s.passed, s.failed, s.pass_rate,
      s.mean_score, s.mean_edits, s.mean_restarts);
}

int CmdEval(Flags const& f) {
  if (f.corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "eval needs --corpus");
  }
  auto pairs = gre::LoadEvalCorpus(f.corpus);
  // Pairs are independent; workers fill slots by index so the report keeps
  // corpus order at any thread count.
  std::vector<gre::MetricReport> reports(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < pairs.size();) {
      reports[i] = gre::EvaluatePair(pairs[i].pair);
    }
  };
  gre::RunConfig threads;
  if (f.parallelism) threads.parallelism = *f.parallelism;
  threads.Validate();
  std::vector<std::thread> pool;
  int const n = std::min<int>(threads.EffectiveParallelism(),
                              std::max<int>(1, static_cast<int>(pairs.size())));
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<gre::EvaluationPair> all;
  gre::ReportRows rows;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    rows.emplace_back(pairs[i].id, reports[i]);
    all.push_back(pairs[i].pair);
  }
  rows.emplace_back("mean", gre::CorpusReport(all));
  fs::path const out = f.out.empty() ? fs::path("out") : fs::path(f.out);
  gre::WriteFile(out / "report.txt", gre::RenderReportTable(rows));
  gre::WriteFile(out / "report.jsonl", gre::RenderReportRecords(rows));
  nlohmann::ordered_json effective{{"command", "eval"}, {"corpus", f.corpus}};
  gre::WriteFile(out / "effective_config.json", effective.dump(2) + "\n");
  std::fputs(gre::RenderReportTable(rows).c_str(), stdout);
  return kExitOk;
}

int CmdRun(Flags const& f) {
  auto c = Resolve(f);
  RequireCorpus(c);
  if (!f.modes.empty()) c.episode.mode = gre::ParseMode(f.modes.front(), c.episode.k);
  c.episode.Validate();
  Persist(c);
  auto backends = MakeBackends(c, LoadActor(c, f.checkpoint),
                               LoadEditor(c, f.editor_checkpoint));
  gre::EpisodeConfig episode = c.episode;
  episode.seed = gre::StreamSeed(c.seed, gre::SeedStream::kEpisodes);
  auto batch = gre::RunBatch(backends, c.corpus, episode,
                             c.EffectiveParallelism());
  fs::path const out = c.out;
  gre::WriteFile(out / "trajectories.jsonl", gre::BatchLogs(batch));
  auto summary = batch.summary.ToJson();
  auto& failures = summary["failures"] = nlohmann::ordered_json::array();
  for (auto const& o : batch.outcomes) {
    if (!o.result) failures.push_back({{"id", o.id}, {"error", o.error}});
  }
  gre::WriteFile(out / "summary.json", summary.dump(2) + "\n");
  PrintSummary(gre::ModeName(c.episode.mode, c.episode.k), batch.summary);
  return batch.summary.failed > 0 ? kExitPartial : kExitOk;
}

int CmdTrain(Flags const& f) {
  if (f.phase != 1 && f.phase != 2) {
    throw Error(ErrorCode::kInvalidConfig, "--phase must be 1 or 2");
  }
  auto c = Resolve(f);
  RequireCorpus(c);
  if (c.backend != "sim") {
    throw Error(ErrorCode::kInvalidConfig, "training runs on the simulator");
  }
  Persist(c);
  fs::path const out = c.out;
  gre::EpisodeConfig eval = c.episode;
  eval.mode = gre::EpisodeMode::kFull;
  int const par = c.EffectiveParallelism();

  gre::ActorPolicy actor = c.InitialActor();
  gre::EditorModel editor = LoadEditor(c, f.editor_checkpoint);
  std::vector<gre::TraceRecord> trace;
  nlohmann::ordered_json evaluation;

  if (f.phase == 1) {
    if (!f.checkpoint.empty()) actor = LoadActor(c, f.checkpoint);
    auto before = gre::EvaluateSim(c, actor, editor, eval, f.eval_repeats, par);
    trace = gre::TrainActor(c, actor, [&](int step) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoints/actor_step_%06d.json", step);
      gre::WriteFile(out / name, gre::SaveCheckpoint(actor));
      return std::string(name);
    });
    gre::WriteFile(out / "actor_final.json", gre::SaveCheckpoint(actor));
    auto after = gre::EvaluateSim(c, actor, editor, eval, f.eval_repeats, par);
    evaluation["before"] = before.summary.ToJson();
    evaluation["after"] = after.summary.ToJson();
  } else {
    if (f.checkpoint.empty() && !f.from_init) {
      throw Error(ErrorCode::kMissingCheckpoint,
                  "phase 2 needs a phase-1 --checkpoint (or --from-init)");
    }
    actor = LoadActor(c, f.checkpoint);
    auto before = gre::EvaluateSim(c, actor, editor, eval, f.eval_repeats, par);
    trace = gre::TrainEditor(c, actor, editor, [&](int step) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoints/editor_step_%06d.json",
                    step);
      gre::WriteFile(out / name, gre::SaveEditorCheckpoint(editor));
      return std::string(name);
    });
    gre::WriteFile(out / "editor_final.json",
                   gre::SaveEditorCheckpoint(editor));
    auto after = gre::EvaluateSim(c, actor, editor, eval, f.eval_repeats, par);
    evaluation["before"] = before.summary.ToJson();
    evaluation["after"] = after.summary.ToJson();
  }

  std::string lines;
  for (auto const& r : trace) lines += gre::TraceRecordLine(r) + "\n";
  gre::WriteFile(out / "trace.jsonl", lines);
  if (trace.size() >= 200) {
    evaluation["first_window_reward"] = gre::WindowMean(trace, 0, 100);
    evaluation["last_window_reward"] =
        gre::WindowMean(trace, trace.size() - 100, 100);
  }
  gre::WriteFile(out / "evaluation.json", evaluation.dump(2) + "\n");
  std::printf("phase %d: %zu steps; pass rate %.4f -> %.4f, mean score %.4f -> %.4f\n",
              f.phase, trace.size(),
              evaluation["before"]["pass_rate"].get<double>(),
              evaluation["after"]["pass_rate"].get<double>(),
              evaluation["before"]["mean_score"].get<double>(),
              evaluation["after"]["mean_score"].get<double>());
  return kExitOk;
}

int CmdAblate(Flags const& f) {
  auto c = Resolve(f);
  RequireCorpus(c);
  std::vector<std::string> modes = f.modes;
  if (modes.empty()) {
    modes = {"full", "same_prompt", "unsatisfied_only", "pass@10"};
  }
  Persist(c);
  auto actor = LoadActor(c, f.checkpoint);
  auto editor = LoadEditor(c, f.editor_checkpoint);
  auto backends = MakeBackends(c, actor, editor);
  gre::ReportRows rows;
  nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
  std::string logs;
  int failed = 0;
  for (auto const& name : modes) {
    gre::EpisodeConfig episode = c.episode;
    episode.mode = gre::ParseMode(name, episode.k);
    episode.seed = gre::StreamSeed(c.seed, gre::SeedStream::kEpisodes);
    auto batch = gre::RunBatch(backends, c.corpus, episode,
                               c.EffectiveParallelism());
    auto label = gre::ModeName(episode.mode, episode.k);
    rows.emplace_back(label, batch.summary.metrics);
    auto s = batch.summary.ToJson();
    s["mode"] = label;
    summaries.push_back(s);
    for (auto const& o : batch.outcomes) {
      if (o.result) logs += o.result->log.ToJsonl(label + "/" + o.id);
    }
    failed += batch.summary.failed;
  }
  fs::path const out = c.out;
  gre::WriteFile(out / "ablation.txt", gre::RenderReportTable(rows));
  gre::WriteFile(out / "ablation.jsonl", gre::RenderReportRecords(rows));
  gre::WriteFile(out / "ablation_summary.json", summaries.dump(2) + "\n");
  gre::WriteFile(out / "trajectories.jsonl", logs);
  std::fputs(gre::RenderReportTable(rows).c_str(), stdout);
  return failed > 0 ? kExitPartial : kExitOk;
}

int CmdReport(Flags const& f) {
  if (f.input.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "report needs --input");
  }
  gre::ReportRows rows;
  std::string const text = gre::ReadFile(f.input);
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("method")) {
      throw Error(ErrorCode::kMalformedDocument,
                  "report input must be metric records (one JSON per line)");
    }
    gre::MetricReport r;
    r.sg_iou = j.value("sg_iou", 0.0);
    r.ent_iou = j.value("ent_iou", 0.0);
    r.rel_iou = j.value("rel_iou", 0.0);
    r.checker_score = j.value("checker_mean", 0.0);
    r.counts.intersection = j.value("intersection", std::size_t{0});
    r.counts.union_size = j.value("union", std::size_t{0});
    r.counts.satisfied = j.value("satisfied", std::size_t{0});
    r.counts.total = j.value("total", std::size_t{0});
    rows.emplace_back(j["method"].get<std::string>(), r);
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyCorpus, "no records");
  auto table = gre::RenderReportTable(rows);
  if (!f.out.empty()) gre::WriteFile(fs::path(f.out) / "report.txt", table);
  std::fputs(table.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate-Reflect-Edit loop, metrics and GRPO training"};
  app.require_subcommand(1);
  Flags f;

  auto* eval = app.add_subcommand("eval", "scene-graph metrics over a corpus");
  eval->add_option("--corpus", f.corpus, "evaluation pairs (JSON)");
  eval->add_option("--out", f.out, "output directory");
  eval->add_option("--parallelism", f.parallelism,
                   "worker threads (default: all cores)");

  auto* run = app.add_subcommand("run", "run episodes over the corpus");
  AddCommon(run, f);
  AddBackend(run, f);
  run->add_option("--mode", f.modes,
                  "full | same_prompt | unsatisfied_only | pass@K")
      ->expected(1);
  run->add_option("--checkpoint", f.checkpoint, "actor checkpoint");
  run->add_option("--editor-checkpoint", f.editor_checkpoint,
                  "editor checkpoint (success logits)");

  auto* train = app.add_subcommand("train", "GRPO training (phase 1 or 2)");
  AddCommon(train, f);
  train->add_option("--phase", f.phase, "1: actor, 2: editor")->required();
  train->add_option("--checkpoint", f.checkpoint,
                    "actor checkpoint (required for phase 2)");
  train->add_option("--editor-checkpoint", f.editor_checkpoint,
                    "editor checkpoint (success logits)");
  train->add_flag("--from-init", f.from_init,
                  "phase 2 with the untrained actor");
  train->add_option("--eval-repeats", f.eval_repeats,
                    "corpus passes for the before/after evaluation")
      ->check(CLI::PositiveNumber);

  auto* ablate = app.add_subcommand("ablate", "compare episode modes");
  AddCommon(ablate, f);
  AddBackend(ablate, f);
  ablate->add_option("--mode", f.modes, "modes to compare (repeatable)");
  ablate->add_option("--checkpoint", f.checkpoint, "actor checkpoint");
  ablate->add_option("--editor-checkpoint", f.editor_checkpoint,
                     "editor checkpoint (success logits)");

  auto* report = app.add_subcommand("report", "render metric records");
  report->add_option("--input", f.input, "metric records (JSONL)");
  report->add_option("--out", f.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*eval) return CmdEval(f);
    if (*run) return CmdRun(f);
    if (*train) return CmdTrain(f);
    if (*ablate) return CmdAblate(f);
    if (*report) return CmdReport(f);
  } catch (Error const& e) {
    std::fprintf(stderr, "gre: %s\n", e.what());
    return kExitConfig;
  } catch (std::exception const& e) {
    std::fprintf(stderr, "gre: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
