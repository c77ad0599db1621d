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

#include <algorithm>

#include "gre/backends.h"
#include "gre/error.h"
#include "gre/random.h"

namespace gre {
namespace {

constexpr std::uint64_t kClauseStream = 3;

WorldState const& RequireWorld(Observation const& obs) {
  if (!obs.world) {
    throw Error(ErrorCode::kInvalidArgument,
                "simulator backends need a simulator observation");
  }
  return *obs.world;
}

std::vector<std::string> SplitClauses(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    auto clause = NormalizeText(current);
    if (!clause.empty()) out.push_back(std::move(clause));
    current.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ';') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace

double CheckerVerdict::Score() const {
  if (total <= 0) throw Error(ErrorCode::kEmptyRequirements, "no requirements");
  return static_cast<double>(satisfied_count) / static_cast<double>(total);
}

std::vector<Requirement> MentionedBy(EditAction const& action,
                                     RequirementSet const& reqs) {
  std::vector<Requirement> out;
  if (action.kind() == EditKind::kNoop ||
      action.kind() == EditKind::kRemoveTriplet) {
    return out;
  }
  for (auto const& r : reqs.items) {
    if (EditAction::FixFor(r) == action) out.push_back(r);
  }
  return out;
}

std::string RenderEditPrompt(std::vector<EditAction> const& actions) {
  std::string out;
  for (auto const& a : actions) {
    if (!out.empty()) out += ", ";
    out += a.Text();
  }
  return out;
}

Observation ObserveWorld(WorldState world) {
  Observation obs;
  obs.artifact = "sim:" + Fingerprint(world);
  obs.graph = world.graph;
  obs.world = std::move(world);
  return obs;
}

SimGenerator::SimGenerator(GenSpec spec, Vocabulary vocabulary)
    : spec_(std::move(spec)), vocabulary_(std::move(vocabulary)) {
  spec_.Validate();
}

Observation SimGenerator::Generate(RequirementSet const& reqs,
                                   std::uint64_t seed) const {
  return ObserveWorld(gre::Generate(reqs, spec_, seed, vocabulary_));
}

SimEditor::SimEditor(EditorModel model) : model_(model) { model_.Validate(); }

Observation SimEditor::Edit(Observation const& current,
                            EditPayload const& payload,
                            std::uint64_t seed) const {
  if (payload.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty edit payload");
  }
  WorldState const& world = RequireWorld(current);
  if (payload.action) {
    return ObserveWorld(
        ApplyEdit(world, *payload.action, model_, seed, payload.mentioned));
  }

  // A free-form prompt: the editor manages one of its clauses.
  std::vector<EditAction> options;
  if (!payload.mentioned.empty()) {
    for (auto const& r : payload.mentioned) {
      options.push_back(EditAction::FixFor(r));
    }
  } else {
    for (auto const& clause : SplitClauses(payload.text)) {
      try {
        options.push_back(EditAction::FromText(clause));
      } catch (Error const&) {
        options.push_back(EditAction::AddTag(clause));
      }
    }
  }
  if (options.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "edit prompt has no clauses");
  }
  SeededSource pick(DeriveSeed(seed, {kClauseStream}));
  auto const& action = options[pick.Below(options.size())];
  return ObserveWorld(
      ApplyEdit(world, action, model_, seed, payload.mentioned));
}

CheckerVerdict SimChecker::Check(Observation const& current,
                                 RequirementSet const& reqs) const {
  if (reqs.items.empty()) {
    throw Error(ErrorCode::kEmptyRequirements, "no requirements to check");
  }
  CheckerVerdict verdict;
  verdict.per_requirement = OracleVerdict(RequireWorld(current), reqs);
  verdict.total = static_cast<int>(reqs.size());
  verdict.satisfied_count = static_cast<int>(
      std::count(verdict.per_requirement.begin(),
                 verdict.per_requirement.end(), true));
  return verdict;
}

SimActor::SimActor(ActorPolicy policy) : policy_(std::move(policy)) {
  policy_.Validate();
}

EditPayload SimActor::Propose(Observation const& current,
                              RequirementSet const& reqs,
                              CheckerVerdict const& /*verdict*/,
                              std::uint64_t seed) const {
  EditPayload payload;
  payload.action = SampleAction(policy_, RequireWorld(current), reqs, seed);
  payload.mentioned = MentionedBy(*payload.action, reqs);
  payload.text = payload.action->Text();
  return payload;
}

Backends MakeSimBackends(GenSpec const& spec, EditorModel const& editor,
                         ActorPolicy const& actor) {
  return {std::make_shared<SimGenerator>(spec),
          std::make_shared<SimEditor>(editor), std::make_shared<SimChecker>(),
          std::make_shared<SimActor>(actor)};
}

}  // namespace gre
