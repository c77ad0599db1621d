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

#include "gre/simworld.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gre/error.h"
#include "gre/extraction.h"

namespace gre {
namespace {

constexpr std::size_t kMaxDistractors = 64;

constexpr std::array<char const*, kTrainableEditKinds> kLogitKeys = {
    "add_triplet", "remove_triplet", "add_entity", "add_tag"};

WorldState GenerateFrom(RequirementSet const& reqs, GenSpec const& spec,
                        DrawSource& draws, Vocabulary const& vocabulary) {
  if (reqs.empty()) {
    throw Error(ErrorCode::kEmptyRequirements, "generate needs requirements");
  }
  spec.Validate();
  WorldState state;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (draws.Uniform() >= spec.Probability(i)) continue;
    auto const& r = reqs.items[i];
    switch (r.kind()) {
      case RequirementKind::kObject:
        state.graph.AddEntity(r.entity());
        break;
      case RequirementKind::kRelation:
        state.graph.AddTriplet(r.triplet());
        break;
      case RequirementKind::kDescription:
        state.description_tags.insert(r.description());
        break;
    }
  }
  std::size_t count = 0;
  if (spec.distractor_rate > 0) {
    // Knuth's product-of-uniforms Poisson sampler.
    double const limit = std::exp(-spec.distractor_rate);
    double product = draws.Uniform();
    while (product >= limit && count < kMaxDistractors) {
      ++count;
      product *= draws.Uniform();
    }
  }
  auto const n_entities = vocabulary.entities.size();
  for (std::size_t k = 0; k < count; ++k) {
    auto s = draws.Below(n_entities);
    auto o = draws.Below(n_entities - 1);
    if (o >= s) ++o;
    auto p = draws.Below(vocabulary.predicates.size());
    state.graph.AddTriplet(Triplet::FromStrings(vocabulary.entities[s],
                                                vocabulary.predicates[p],
                                                vocabulary.entities[o]));
  }
  return state;
}

bool IsProtected(Triplet const& t, EditAction const& action,
                 std::span<Requirement const> mentioned) {
  if ((action.kind() == EditKind::kAddTriplet ||
       action.kind() == EditKind::kRemoveTriplet) &&
      t == action.triplet()) {
    return true;
  }
  return std::any_of(mentioned.begin(), mentioned.end(), [&](auto const& r) {
    return r.kind() == RequirementKind::kRelation && t.Covers(r.triplet());
  });
}

EditOutcome EditFrom(WorldState const& state, EditAction const& action,
                     EditorModel const& editor, DrawSource& draws,
                     std::span<Requirement const> mentioned) {
  EditOutcome outcome{state, false, std::nullopt};
  auto& next = outcome.state;
  next.step_index = state.step_index + 1;
  if (action.kind() == EditKind::kNoop) {
    outcome.applied = true;
    return outcome;
  }
  if (draws.Uniform() < editor.SuccessProbability(action.kind())) {
    outcome.applied = true;
    switch (action.kind()) {
      case EditKind::kAddTriplet:
        next.graph.AddTriplet(action.triplet());
        break;
      case EditKind::kRemoveTriplet:
        next.graph.RemoveTriplet(action.triplet());
        break;
      case EditKind::kAddEntity:
        next.graph.AddEntity(action.entity());
        break;
      case EditKind::kAddTag:
        next.description_tags.insert(action.tag());
        break;
      case EditKind::kNoop:
        break;
    }
  }
  if (draws.Uniform() < editor.side_effect_rate) {
    std::vector<Triplet> pool;
    for (auto const& t : next.graph.triplets()) {
      if (!IsProtected(t, action, mentioned)) pool.push_back(t);
    }
    if (!pool.empty()) {
      auto const& victim = pool[draws.Below(pool.size())];
      next.graph.RemoveTriplet(victim);
      outcome.collateral = victim;
    }
  }
  return outcome;
}

}  // namespace

double GenSpec::Probability(std::size_t index) const {
  return index < per_requirement.size() ? per_requirement[index]
                                        : base_probability;
}

void GenSpec::Validate() const {
  auto bad = [](double p) { return !(p >= 0.0 && p <= 1.0); };
  if (bad(base_probability) ||
      std::any_of(per_requirement.begin(), per_requirement.end(), bad)) {
    throw Error(ErrorCode::kInvalidConfig, "probabilities must be in [0,1]");
  }
  if (!(distractor_rate >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "distractor_rate must be >= 0");
  }
}

std::string_view EditKindName(EditKind kind) {
  switch (kind) {
    case EditKind::kAddTriplet: return "add_triplet";
    case EditKind::kRemoveTriplet: return "remove_triplet";
    case EditKind::kAddEntity: return "add_entity";
    case EditKind::kAddTag: return "add_tag";
    case EditKind::kNoop: return "noop";
  }
  return "unknown";
}

EditAction EditAction::AddTriplet(Triplet t) {
  return EditAction(EditKind::kAddTriplet, std::move(t));
}
EditAction EditAction::RemoveTriplet(Triplet t) {
  return EditAction(EditKind::kRemoveTriplet, std::move(t));
}
EditAction EditAction::AddEntity(Entity e) {
  return EditAction(EditKind::kAddEntity, std::move(e));
}
EditAction EditAction::AddTag(std::string tag) {
  auto normalized = NormalizeText(tag);
  if (normalized.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty tag");
  }
  return EditAction(EditKind::kAddTag, std::move(normalized));
}
EditAction EditAction::Noop() {
  return EditAction(EditKind::kNoop, std::monostate{});
}

EditAction EditAction::FixFor(Requirement const& req) {
  switch (req.kind()) {
    case RequirementKind::kObject: return AddEntity(req.entity());
    case RequirementKind::kRelation: return AddTriplet(req.triplet());
    case RequirementKind::kDescription: return AddTag(req.description());
  }
  return Noop();
}

EditAction EditAction::FromText(std::string_view text, Lexicon const& lexicon) {
  auto normalized = NormalizeText(text);
  if (normalized.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty edit clause");
  }
  if (normalized == "no change") return Noop();
  constexpr std::string_view kRemove = "remove ";
  if (normalized.starts_with(kRemove)) {
    auto req = ParseClause(normalized.substr(kRemove.size()), lexicon);
    if (req.kind() != RequirementKind::kRelation) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot parse removal '" + normalized + "'");
    }
    return RemoveTriplet(req.triplet());
  }
  return FixFor(ParseClause(normalized, lexicon));
}

std::string EditAction::Text() const {
  switch (kind_) {
    case EditKind::kAddTriplet: return triplet().Text();
    case EditKind::kRemoveTriplet: return "remove " + triplet().Text();
    case EditKind::kAddEntity: return "a " + entity().key();
    case EditKind::kAddTag: return tag();
    case EditKind::kNoop: return "no change";
  }
  return {};
}

double Logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  auto e = std::exp(x);
  return e / (1.0 + e);
}

double Logit(double p) { return std::log(p) - std::log1p(-p); }

EditorModel EditorModel::WithSuccess(double probability,
                                     double side_effect_rate) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "editor success probability must be in [0,1]");
  }
  EditorModel model;
  model.logits.fill(Logit(probability));
  model.side_effect_rate = side_effect_rate;
  model.Validate();
  return model;
}

double EditorModel::SuccessProbability(EditKind kind) const {
  if (kind == EditKind::kNoop) return 1.0;
  return Logistic(logits[static_cast<std::size_t>(kind)]);
}

void EditorModel::Validate() const {
  if (!(side_effect_rate >= 0.0 && side_effect_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "side_effect_rate must be in [0,1]");
  }
  for (auto l : logits) {
    // +-inf encode certain success / failure.
    if (std::isnan(l)) {
      throw Error(ErrorCode::kInvalidConfig, "editor logits must not be NaN");
    }
  }
}

WorldState Generate(RequirementSet const& reqs, GenSpec const& spec,
                    std::uint64_t seed, Vocabulary const& vocabulary) {
  RecordingSource draws(DeriveSeed(spec.rng_seed, {seed}));
  auto state = GenerateFrom(reqs, spec, draws, vocabulary);
  state.seed_trace = draws.TakeTrace();
  return state;
}

WorldState ReplayGenerate(RequirementSet const& reqs, GenSpec const& spec,
                          std::span<std::uint64_t const> trace,
                          Vocabulary const& vocabulary) {
  ReplaySource draws(trace);
  auto state = GenerateFrom(reqs, spec, draws, vocabulary);
  state.seed_trace.assign(trace.begin(), trace.begin() + draws.consumed());
  return state;
}

EditOutcome ApplyEditDetailed(WorldState const& state, EditAction const& action,
                              EditorModel const& editor, std::uint64_t seed,
                              std::span<Requirement const> mentioned) {
  RecordingSource draws(seed);
  auto outcome = EditFrom(state, action, editor, draws, mentioned);
  auto const& trace = draws.trace();
  outcome.state.seed_trace.insert(outcome.state.seed_trace.end(),
                                  trace.begin(), trace.end());
  return outcome;
}

WorldState ApplyEdit(WorldState const& state, EditAction const& action,
                     EditorModel const& editor, std::uint64_t seed,
                     std::span<Requirement const> mentioned) {
  return ApplyEditDetailed(state, action, editor, seed, mentioned).state;
}

EditOutcome ReplayEdit(WorldState const& state, EditAction const& action,
                       EditorModel const& editor,
                       std::span<std::uint64_t const> trace,
                       std::span<Requirement const> mentioned) {
  ReplaySource draws(trace);
  auto outcome = EditFrom(state, action, editor, draws, mentioned);
  outcome.state.seed_trace.insert(outcome.state.seed_trace.end(), trace.begin(),
                                  trace.begin() + draws.consumed());
  return outcome;
}

std::vector<bool> OracleVerdict(WorldState const& state,
                                RequirementSet const& reqs) {
  std::vector<bool> bits;
  bits.reserve(reqs.size());
  for (auto const& r : reqs.items) {
    if (r.kind() == RequirementKind::kDescription) {
      bits.push_back(state.description_tags.contains(r.description()));
    } else {
      bits.push_back(Satisfies(state.graph, r));
    }
  }
  return bits;
}

double OracleCheck(WorldState const& state, RequirementSet const& reqs) {
  if (reqs.empty()) {
    throw Error(ErrorCode::kEmptyRequirements, "oracle check needs requirements");
  }
  auto bits = OracleVerdict(state, reqs);
  return static_cast<double>(std::count(bits.begin(), bits.end(), true)) /
         static_cast<double>(reqs.size());
}

std::string Fingerprint(WorldState const& state) {
  auto canonical = RenderExtractionDocument(state.graph);
  canonical += "\ntags:";
  for (auto const& t : state.description_tags) canonical += "\n" + t;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(HashString(canonical)));
  return buf;
}

nlohmann::json ToJson(GenSpec const& spec) {
  return {{"base_probability", spec.base_probability},
          {"per_requirement", spec.per_requirement},
          {"distractor_rate", spec.distractor_rate},
          {"rng_seed", spec.rng_seed}};
}

GenSpec GenSpecFromJson(nlohmann::json const& j) {
  GenSpec spec;
  try {
    spec.base_probability = j.value("base_probability", spec.base_probability);
    spec.per_requirement =
        j.value("per_requirement", std::vector<double>{});
    spec.distractor_rate = j.value("distractor_rate", spec.distractor_rate);
    spec.rng_seed = j.value("rng_seed", spec.rng_seed);
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("genspec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

nlohmann::json ToJson(EditorModel const& editor) {
  // JSON has no infinities; certain success/failure uses the shorthand.
  bool const uniform = std::all_of(
      editor.logits.begin(), editor.logits.end(),
      [&](double l) { return l == editor.logits[0]; });
  if (uniform && !std::isfinite(editor.logits[0])) {
    return {{"success", Logistic(editor.logits[0])},
            {"side_effect_rate", editor.side_effect_rate}};
  }
  nlohmann::json logits;
  for (std::size_t k = 0; k < kTrainableEditKinds; ++k) {
    logits[kLogitKeys[k]] = editor.logits[k];
  }
  return {{"logits", logits}, {"side_effect_rate", editor.side_effect_rate}};
}

EditorModel EditorModelFromJson(nlohmann::json const& j) {
  EditorModel editor;
  try {
    editor.side_effect_rate = j.value("side_effect_rate", 0.0);
    if (j.contains("success")) {
      return EditorModel::WithSuccess(j.at("success").get<double>(),
                                      editor.side_effect_rate);
    }
    auto const& logits = j.at("logits");
    for (std::size_t k = 0; k < kTrainableEditKinds; ++k) {
      editor.logits[k] = logits.at(kLogitKeys[k]).get<double>();
    }
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("editor: ") + e.what());
  }
  editor.Validate();
  return editor;
}

}  // namespace gre
