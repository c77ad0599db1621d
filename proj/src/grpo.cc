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

#include "gre/grpo.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gre/error.h"
#include "gre/random.h"

namespace gre {
namespace {

constexpr std::uint64_t kActorStream = 1;
constexpr std::uint64_t kEditorStream = 2;

void RequireFailing(WorldState const& state, RequirementSet const& reqs) {
  if (OracleCheck(state, reqs) >= 1.0) {
    throw Error(ErrorCode::kStateAlreadyPassing,
                "training state already satisfies every requirement");
  }
}

double Ratio(double log_live, double log_ref) {
  double rho = std::exp(log_live - log_ref);
  if (!std::isfinite(rho)) {
    throw Error(ErrorCode::kNonFiniteRatio, "importance ratio is not finite");
  }
  return rho;
}

// d(term)/d(log_live): rho * adv on the unclipped branch, 0 when clipped.
double SurrogateSlope(double ratio, double advantage, double epsilon) {
  double const clipped = std::clamp(ratio, 1 - epsilon, 1 + epsilon);
  return ratio * advantage <= clipped * advantage ? ratio * advantage : 0.0;
}

double BernoulliKl(double p, double q) {
  double kl = 0;
  if (p > 0) kl += p * std::log(p / q);
  if (p < 1) kl += (1 - p) * std::log((1 - p) / (1 - q));
  return std::max(kl, 0.0);
}

std::size_t KindIndex(EditKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

void GrpoConfig::Validate() const {
  auto fail = [](std::string const& what) {
    throw Error(ErrorCode::kInvalidConfig, what);
  };
  if (group_size < 2) fail("group_size must be at least 2");
  if (!(clip_epsilon > 0 && clip_epsilon < 1)) fail("clip_epsilon in (0,1)");
  if (!(kl_coefficient >= 0)) fail("kl_coefficient must be >= 0");
  if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be >= 0");
  }
  if (steps < 0) fail("steps must be >= 0");
  if (!(sigma_floor > 0)) fail("sigma_floor must be > 0");
  if (reference_refresh < 0) fail("reference_refresh must be >= 0");
  if (checkpoint_interval < 0) fail("checkpoint_interval must be >= 0");
}

nlohmann::json ToJson(GrpoConfig const& c) {
  return {{"group_size", c.group_size},
          {"clip_epsilon", c.clip_epsilon},
          {"kl_coefficient", c.kl_coefficient},
          {"learning_rate", c.learning_rate},
          {"steps", c.steps},
          {"seed", c.seed},
          {"sigma_floor", c.sigma_floor},
          {"reference_refresh", c.reference_refresh},
          {"checkpoint_interval", c.checkpoint_interval}};
}

GrpoConfig GrpoConfigFromJson(nlohmann::json const& j, GrpoConfig c) {
  try {
    c.group_size = j.value("group_size", c.group_size);
    c.clip_epsilon = j.value("clip_epsilon", c.clip_epsilon);
    c.kl_coefficient = j.value("kl_coefficient", c.kl_coefficient);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.steps = j.value("steps", c.steps);
    c.seed = j.value("seed", c.seed);
    c.sigma_floor = j.value("sigma_floor", c.sigma_floor);
    c.reference_refresh = j.value("reference_refresh", c.reference_refresh);
    c.checkpoint_interval =
        j.value("checkpoint_interval", c.checkpoint_interval);
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("grpo: ") + e.what());
  }
  c.Validate();
  return c;
}

std::vector<double> RolloutGroup::Rewards() const {
  std::vector<double> rewards;
  rewards.reserve(entries.size());
  for (auto const& e : entries) rewards.push_back(e.reward);
  return rewards;
}

double RolloutGroup::MeanReward() const {
  if (entries.empty()) return 0;
  auto r = Rewards();
  return std::accumulate(r.begin(), r.end(), 0.0) /
         static_cast<double>(r.size());
}

std::vector<double> ComputeAdvantages(std::span<double const> rewards,
                                      double sigma_floor) {
  if (rewards.size() < 2) {
    throw Error(ErrorCode::kGroupTooSmall, "group needs at least 2 rewards");
  }
  double const n = static_cast<double>(rewards.size());
  double const mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  double const sigma = std::sqrt(var / n);
  std::vector<double> adv(rewards.size(), 0.0);
  if (sigma < sigma_floor) return adv;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    adv[i] = (rewards[i] - mean) / sigma;
  }
  return adv;
}

double SurrogateTerm(double ratio, double advantage, double epsilon) {
  double const clipped = std::clamp(ratio, 1 - epsilon, 1 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

LossResult GrpoLoss(RolloutGroup const& group, RequirementSet const& reqs,
                    ActorPolicy const& policy, ActorPolicy const& reference,
                    GrpoConfig const& config) {
  auto const adv = ComputeAdvantages(group.Rewards(), config.sigma_floor);
  auto const live = MakeDistribution(policy, group.state, reqs);
  auto const ref = MakeDistribution(reference, group.state, reqs);

  FeatureVector mean{};
  for (std::size_t a = 0; a < live.support.size(); ++a) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      mean[k] += live.probabilities[a] * live.features[a][k];
    }
  }

  LossResult out;
  out.gradient.assign(kFeatureCount, 0.0);
  double const g = static_cast<double>(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    std::size_t const a = live.IndexOf(group.entries[i].action);
    double const rho =
        Ratio(live.log_probabilities[a], ref.log_probabilities[a]);
    out.surrogate += SurrogateTerm(rho, adv[i], config.clip_epsilon) / g;
    double const slope = SurrogateSlope(rho, adv[i], config.clip_epsilon);
    if (slope == 0) continue;
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      out.gradient[k] += slope * (live.features[a][k] - mean[k]) /
                         policy.temperature / g;
    }
  }

  out.kl = ExactKl(live, ref);
  if (config.kl_coefficient > 0) {
    auto const kl_grad = GradExactKl(policy, reference, group.state, reqs);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      out.gradient[k] -= config.kl_coefficient * kl_grad[k];
    }
  }
  out.objective = out.surrogate - config.kl_coefficient * out.kl;
  return out;
}

double EditorLogProb(EditorModel const& editor, EditKind kind, bool applied) {
  if (kind == EditKind::kNoop) return 0;
  double const l = editor.logits[KindIndex(kind)];
  // log sigmoid(l) and log(1 - sigmoid(l)), written to avoid cancellation.
  double const x = applied ? l : -l;
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

LossResult GrpoLoss(RolloutGroup const& group, EditorModel const& editor,
                    EditorModel const& reference, GrpoConfig const& config) {
  auto const adv = ComputeAdvantages(group.Rewards(), config.sigma_floor);
  LossResult out;
  out.gradient.assign(kTrainableEditKinds, 0.0);
  double const g = static_cast<double>(group.size());

  std::array<bool, kTrainableEditKinds> used{};
  for (std::size_t i = 0; i < group.size(); ++i) {
    auto const& e = group.entries[i];
    EditKind const kind = e.action.kind();
    double const lp = EditorLogProb(editor, kind, e.applied);
    double const lq = EditorLogProb(reference, kind, e.applied);
    double const rho = Ratio(lp, lq);
    out.surrogate += SurrogateTerm(rho, adv[i], config.clip_epsilon) / g;
    if (kind == EditKind::kNoop) continue;
    used[KindIndex(kind)] = true;
    double const slope = SurrogateSlope(rho, adv[i], config.clip_epsilon);
    double const p = editor.SuccessProbability(kind);
    out.gradient[KindIndex(kind)] += slope * (e.applied ? 1 - p : -p) / g;
  }

  // KL between the success Bernoullis of every kind exercised by the group.
  for (std::size_t k = 0; k < kTrainableEditKinds; ++k) {
    if (!used[k]) continue;
    double const p = Logistic(editor.logits[k]);
    double const q = Logistic(reference.logits[k]);
    out.kl += BernoulliKl(p, q);
    out.gradient[k] -= config.kl_coefficient * p * (1 - p) *
                       (editor.logits[k] - reference.logits[k]);
  }
  out.objective = out.surrogate - config.kl_coefficient * out.kl;
  return out;
}

RolloutGroup CollectGroupPhase1(ActorPolicy const& policy,
                                ActorPolicy const& reference,
                                EditorModel const& editor,
                                RequirementSet const& reqs,
                                WorldState const& state,
                                GrpoConfig const& config, std::uint64_t seed) {
  RequireFailing(state, reqs);
  auto const live = MakeDistribution(policy, state, reqs);
  auto const ref = MakeDistribution(reference, state, reqs);
  RolloutGroup group;
  group.state = state;
  for (int i = 0; i < config.group_size; ++i) {
    RolloutEntry e;
    e.seed = seed + static_cast<std::uint64_t>(i);
    SeededSource draws(DeriveSeed(e.seed, {kActorStream}));
    std::size_t const a = SampleIndex(live, draws);
    e.action = live.support[a];
    auto outcome = ApplyEditDetailed(state, e.action, editor,
                                     DeriveSeed(e.seed, {kEditorStream}));
    e.next_state = std::move(outcome.state);
    e.applied = outcome.applied;
    e.reward = OracleCheck(e.next_state, reqs);
    e.log_prob_live = live.log_probabilities[a];
    e.log_prob_ref = ref.log_probabilities[a];
    group.entries.push_back(std::move(e));
  }
  return group;
}

RolloutGroup CollectGroupPhase2(ActorPolicy const& policy,
                                EditorModel const& editor,
                                EditorModel const& reference,
                                RequirementSet const& reqs,
                                WorldState const& state,
                                GrpoConfig const& config, std::uint64_t seed) {
  RequireFailing(state, reqs);
  EditAction const action =
      SampleAction(policy, state, reqs, DeriveSeed(seed, {kActorStream}));
  RolloutGroup group;
  group.state = state;
  for (int i = 0; i < config.group_size; ++i) {
    RolloutEntry e;
    e.seed = seed + static_cast<std::uint64_t>(i);
    e.action = action;
    auto outcome = ApplyEditDetailed(state, action, editor,
                                     DeriveSeed(e.seed, {kEditorStream}));
    e.next_state = std::move(outcome.state);
    e.applied = outcome.applied;
    e.reward = OracleCheck(e.next_state, reqs);
    e.log_prob_live = EditorLogProb(editor, action.kind(), e.applied);
    e.log_prob_ref = EditorLogProb(reference, action.kind(), e.applied);
    group.entries.push_back(std::move(e));
  }
  return group;
}

std::vector<TrainingItem> BuildTrainingPool(
    std::vector<std::pair<std::string, RequirementSet>> const& corpus,
    GenSpec const& spec, std::uint64_t seed, std::size_t size) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty corpus");
  std::vector<TrainingItem> pool;
  std::size_t const max_attempts = 1000 * (size + 1);
  for (std::size_t j = 0; pool.size() < size && j < max_attempts; ++j) {
    auto const& [id, reqs] = corpus[j % corpus.size()];
    auto state = Generate(reqs, spec, DeriveSeed(seed, {HashString(id), j}));
    if (OracleCheck(state, reqs) < 1.0) {
      pool.push_back({id, reqs, std::move(state)});
    }
  }
  if (pool.size() < size) {
    throw Error(ErrorCode::kInvalidConfig,
                "could not find enough failing states for the training pool");
  }
  return pool;
}

std::string TraceRecordLine(TraceRecord const& r) {
  nlohmann::ordered_json j;
  j["step"] = r.step;
  j["phase"] = r.phase;
  j["mean_reward"] = r.mean_reward;
  j["kl"] = r.kl;
  j["loss"] = r.loss;
  j["checkpoint_ref"] = r.checkpoint_ref;
  return j.dump();
}

std::vector<TraceRecord> TrainPhase1(std::span<TrainingItem const> pool,
                                     ActorPolicy& policy,
                                     EditorModel const& editor,
                                     GrpoConfig const& config,
                                     CheckpointHook const& hook) {
  config.Validate();
  policy.Validate();
  if (pool.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty pool");
  ActorPolicy reference = SnapshotReference(policy);
  std::vector<TraceRecord> trace;
  for (int s = 0; s < config.steps; ++s) {
    if (config.reference_refresh > 0 && s > 0 &&
        s % config.reference_refresh == 0) {
      reference = SnapshotReference(policy);
    }
    auto const& item = pool[static_cast<std::size_t>(s) % pool.size()];
    auto const group = CollectGroupPhase1(
        policy, reference, editor, item.reqs, item.state, config,
        DeriveSeed(config.seed, {1, static_cast<std::uint64_t>(s)}));
    auto const loss = GrpoLoss(group, item.reqs, policy, reference, config);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      policy.weights[k] += config.learning_rate * loss.gradient[k];
    }
    TraceRecord rec{s, 1, group.MeanReward(), loss.kl, loss.objective, ""};
    if (hook && config.checkpoint_interval > 0 &&
        (s + 1) % config.checkpoint_interval == 0) {
      rec.checkpoint_ref = hook(s + 1);
    }
    trace.push_back(std::move(rec));
  }
  return trace;
}

std::vector<TraceRecord> TrainPhase2(std::span<TrainingItem const> pool,
                                     ActorPolicy const& policy,
                                     EditorModel& editor,
                                     GrpoConfig const& config,
                                     CheckpointHook const& hook) {
  config.Validate();
  editor.Validate();
  for (double l : editor.logits) {
    if (!std::isfinite(l)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "phase-2 training needs success probabilities in (0,1)");
    }
  }
  if (pool.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty pool");
  EditorModel reference = editor;
  std::vector<TraceRecord> trace;
  for (int s = 0; s < config.steps; ++s) {
    if (config.reference_refresh > 0 && s > 0 &&
        s % config.reference_refresh == 0) {
      reference = editor;
    }
    auto const& item = pool[static_cast<std::size_t>(s) % pool.size()];
    auto const group = CollectGroupPhase2(
        policy, editor, reference, item.reqs, item.state, config,
        DeriveSeed(config.seed, {2, static_cast<std::uint64_t>(s)}));
    auto const loss = GrpoLoss(group, editor, reference, config);
    for (std::size_t k = 0; k < kTrainableEditKinds; ++k) {
      editor.logits[k] += config.learning_rate * loss.gradient[k];
    }
    TraceRecord rec{s, 2, group.MeanReward(), loss.kl, loss.objective, ""};
    if (hook && config.checkpoint_interval > 0 &&
        (s + 1) % config.checkpoint_interval == 0) {
      rec.checkpoint_ref = hook(s + 1);
    }
    trace.push_back(std::move(rec));
  }
  return trace;
}

double WindowMean(std::span<TraceRecord const> trace, std::size_t begin,
                  std::size_t width) {
  if (width == 0 || begin + width > trace.size()) {
    throw Error(ErrorCode::kInvalidArgument, "window outside the trace");
  }
  double sum = 0;
  for (std::size_t i = begin; i < begin + width; ++i) {
    sum += trace[i].mean_reward;
  }
  return sum / static_cast<double>(width);
}

}  // namespace gre
