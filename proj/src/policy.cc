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

#include "gre/policy.h"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "gre/error.h"

namespace gre {
namespace {

constexpr int kCheckpointVersion = 1;
constexpr std::size_t kNoopIndex = static_cast<std::size_t>(EditKind::kNoop);

struct FeatureContext {
  std::vector<bool> verdict;
  std::size_t deficit = 0;
};

FeatureContext MakeContext(WorldState const& state,
                           RequirementSet const& reqs) {
  FeatureContext ctx;
  ctx.verdict = OracleVerdict(state, reqs);
  ctx.deficit = static_cast<std::size_t>(
      std::count(ctx.verdict.begin(), ctx.verdict.end(), false));
  return ctx;
}

bool FixesUnsatisfied(EditAction const& action, RequirementSet const& reqs,
                      FeatureContext const& ctx) {
  if (action.kind() == EditKind::kNoop ||
      action.kind() == EditKind::kRemoveTriplet) {
    return false;
  }
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (!ctx.verdict[i] && EditAction::FixFor(reqs.items[i]) == action) {
      return true;
    }
  }
  return false;
}

FeatureVector FeaturizeWith(WorldState const& state, RequirementSet const& reqs,
                            EditAction const& action,
                            FeatureContext const& ctx) {
  FeatureVector f{};
  auto kind = static_cast<std::size_t>(action.kind());
  f[kind] = 1.0;
  f[5] = FixesUnsatisfied(action, reqs, ctx) ? 1.0 : 0.0;
  if (kind == kNoopIndex) {
    f[6] = static_cast<double>(ctx.deficit);
    f[7] = static_cast<double>(state.step_index);
  }
  return f;
}

double Dot(std::vector<double> const& w, FeatureVector const& f) {
  double sum = 0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) sum += w[i] * f[i];
  return sum;
}

}  // namespace

std::string_view FeatureBasisFingerprint() {
  return "kind5+fixes_unsatisfied+noop*deficit+noop*step/v1";
}

ActorPolicy ActorPolicy::WithNoopBias(double bias) {
  ActorPolicy policy;
  policy.weights[kNoopIndex] = bias;
  return policy;
}

void ActorPolicy::Validate() const {
  if (weights.size() != kFeatureCount) {
    throw Error(ErrorCode::kInvalidConfig, "actor weights have wrong length");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidConfig, "temperature must be positive");
  }
  if (!std::all_of(weights.begin(), weights.end(),
                   [](double w) { return std::isfinite(w); })) {
    throw Error(ErrorCode::kInvalidConfig, "actor weights must be finite");
  }
}

std::size_t ActionDistribution::IndexOf(EditAction const& action) const {
  auto it = std::find(support.begin(), support.end(), action);
  if (it == support.end()) {
    throw Error(ErrorCode::kActionNotInSupport,
                "'" + action.Text() + "' is not a candidate");
  }
  return static_cast<std::size_t>(it - support.begin());
}

std::vector<EditAction> CandidateActions(WorldState const& state,
                                         RequirementSet const& reqs) {
  auto verdict = OracleVerdict(state, reqs);
  std::vector<EditAction> actions;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (verdict[i]) continue;
    auto fix = EditAction::FixFor(reqs.items[i]);
    if (std::find(actions.begin(), actions.end(), fix) == actions.end()) {
      actions.push_back(std::move(fix));
    }
  }
  for (auto const& t : state.graph.triplets()) {
    bool witness = std::any_of(
        reqs.items.begin(), reqs.items.end(), [&](Requirement const& r) {
          return r.kind() == RequirementKind::kRelation &&
                 t.Covers(r.triplet());
        });
    if (!witness) actions.push_back(EditAction::RemoveTriplet(t));
  }
  actions.push_back(EditAction::Noop());
  return actions;
}

FeatureVector Featurize(WorldState const& state, RequirementSet const& reqs,
                        EditAction const& action) {
  return FeaturizeWith(state, reqs, action, MakeContext(state, reqs));
}

ActionDistribution MakeDistribution(ActorPolicy const& policy,
                                    WorldState const& state,
                                    RequirementSet const& reqs) {
  ActionDistribution dist;
  auto ctx = MakeContext(state, reqs);
  dist.support = CandidateActions(state, reqs);
  std::vector<double> logits;
  logits.reserve(dist.support.size());
  for (auto const& a : dist.support) {
    dist.features.push_back(FeaturizeWith(state, reqs, a, ctx));
    logits.push_back(Dot(policy.weights, dist.features.back()) /
                     policy.temperature);
  }
  double const top = *std::max_element(logits.begin(), logits.end());
  double sum = 0;
  for (auto l : logits) sum += std::exp(l - top);
  double const log_norm = top + std::log(sum);
  for (auto l : logits) {
    dist.log_probabilities.push_back(l - log_norm);
    dist.probabilities.push_back(std::exp(l - log_norm));
  }
  return dist;
}

double LogProb(ActorPolicy const& policy, WorldState const& state,
               RequirementSet const& reqs, EditAction const& action) {
  auto dist = MakeDistribution(policy, state, reqs);
  return dist.log_probabilities[dist.IndexOf(action)];
}

std::vector<double> GradLogProb(ActorPolicy const& policy,
                                WorldState const& state,
                                RequirementSet const& reqs,
                                EditAction const& action) {
  auto dist = MakeDistribution(policy, state, reqs);
  auto const& chosen = dist.features[dist.IndexOf(action)];
  std::vector<double> grad(chosen.begin(), chosen.end());
  for (std::size_t b = 0; b < dist.support.size(); ++b) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      grad[i] -= dist.probabilities[b] * dist.features[b][i];
    }
  }
  for (auto& g : grad) g /= policy.temperature;
  return grad;
}

double ExactKl(ActionDistribution const& p, ActionDistribution const& q) {
  if (p.support != q.support) {
    throw Error(ErrorCode::kSupportMismatch,
                "KL requires identical candidate sets");
  }
  double kl = 0;
  for (std::size_t a = 0; a < p.support.size(); ++a) {
    kl += p.probabilities[a] * (p.log_probabilities[a] - q.log_probabilities[a]);
  }
  return std::max(kl, 0.0);
}

double ExactKl(ActorPolicy const& policy, ActorPolicy const& reference,
               WorldState const& state, RequirementSet const& reqs) {
  return ExactKl(MakeDistribution(policy, state, reqs),
                 MakeDistribution(reference, state, reqs));
}

std::vector<double> GradExactKl(ActorPolicy const& policy,
                                ActorPolicy const& reference,
                                WorldState const& state,
                                RequirementSet const& reqs) {
  auto p = MakeDistribution(policy, state, reqs);
  auto q = MakeDistribution(reference, state, reqs);
  FeatureVector mean{};
  for (std::size_t a = 0; a < p.support.size(); ++a) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      mean[i] += p.probabilities[a] * p.features[a][i];
    }
  }
  // dKL/dw = (1/T) sum_a p_a (f_a - E_p[f]) (log p_a - log q_a)
  std::vector<double> grad(kFeatureCount, 0.0);
  for (std::size_t a = 0; a < p.support.size(); ++a) {
    double const weight =
        p.probabilities[a] * (p.log_probabilities[a] - q.log_probabilities[a]);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      grad[i] += weight * (p.features[a][i] - mean[i]);
    }
  }
  for (auto& g : grad) g /= policy.temperature;
  return grad;
}

ActorPolicy SnapshotReference(ActorPolicy const& policy) { return policy; }

std::size_t SampleIndex(ActionDistribution const& dist, DrawSource& draws) {
  double u = draws.Uniform();
  double cumulative = 0;
  for (std::size_t a = 0; a < dist.probabilities.size(); ++a) {
    cumulative += dist.probabilities[a];
    if (u < cumulative) return a;
  }
  return dist.probabilities.size() - 1;
}

EditAction SampleAction(ActorPolicy const& policy, WorldState const& state,
                        RequirementSet const& reqs, std::uint64_t seed) {
  auto dist = MakeDistribution(policy, state, reqs);
  SeededSource draws(seed);
  return dist.support[SampleIndex(dist, draws)];
}

std::string SaveCheckpoint(ActorPolicy const& policy) {
  nlohmann::ordered_json doc;
  doc["format"] = "gre.actor_policy";
  doc["version"] = kCheckpointVersion;
  doc["feature_basis"] = FeatureBasisFingerprint();
  doc["temperature"] = policy.temperature;
  doc["weights"] = policy.weights;
  return doc.dump(2) + "\n";
}

ActorPolicy LoadCheckpoint(std::string_view text) {
  auto doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, "checkpoint is not JSON");
  }
  if (doc.value("format", "") != "gre.actor_policy" ||
      doc.value("version", 0) != kCheckpointVersion) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "not a version-1 actor checkpoint");
  }
  if (doc.value("feature_basis", "") != FeatureBasisFingerprint()) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "feature basis '" + doc.value("feature_basis", "") +
                    "' does not match '" +
                    std::string(FeatureBasisFingerprint()) + "'");
  }
  ActorPolicy policy;
  try {
    policy.temperature = doc.at("temperature").get<double>();
    policy.weights = doc.at("weights").get<std::vector<double>>();
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  policy.Validate();
  return policy;
}

std::string SaveEditorCheckpoint(EditorModel const& editor) {
  nlohmann::ordered_json doc;
  doc["format"] = "gre.editor_model";
  doc["version"] = kCheckpointVersion;
  doc["editor"] = ToJson(editor);
  return doc.dump(2) + "\n";
}

EditorModel LoadEditorCheckpoint(std::string_view text) {
  auto doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, "checkpoint is not JSON");
  }
  if (doc.value("format", "") != "gre.editor_model" ||
      doc.value("version", 0) != kCheckpointVersion || !doc.contains("editor")) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "not a version-1 editor checkpoint");
  }
  return EditorModelFromJson(doc["editor"]);
}

}  // namespace gre
