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

#ifndef GRE_BACKENDS_H_
#define GRE_BACKENDS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gre/policy.h"
#include "gre/requirements.h"
#include "gre/scene_graph.h"
#include "gre/simworld.h"
#include "gre/vocabulary.h"

namespace gre {

/// What a backend hands back after generating or editing: an artifact
/// reference, the extracted scene graph, and (simulator only) the world.
struct Observation {
  std::string artifact;
  SceneGraph graph;
  std::optional<WorldState> world;
  int retries = 0;
};

struct EditPayload {
  std::optional<EditAction> action;
  // Requirements the edit prompt speaks about; the editor leaves their
  // witnesses alone.
  std::vector<Requirement> mentioned;
  std::string text;
  int retries = 0;

  bool empty() const { return !action && mentioned.empty() && text.empty(); }
};

struct CheckerVerdict {
  int satisfied_count = 0;
  int total = 0;
  // Empty when the backend reports only a count.
  std::vector<bool> per_requirement;
  std::string raw_response;
  bool clamped = false;
  int retries = 0;

  double Score() const;
};

class Generator {
 public:
  virtual ~Generator() = default;
  virtual Observation Generate(RequirementSet const& reqs,
                               std::uint64_t seed) const = 0;
};

class Editor {
 public:
  virtual ~Editor() = default;
  virtual Observation Edit(Observation const& current,
                           EditPayload const& payload,
                           std::uint64_t seed) const = 0;
};

class Checker {
 public:
  virtual ~Checker() = default;
  virtual CheckerVerdict Check(Observation const& current,
                               RequirementSet const& reqs) const = 0;
};

class Actor {
 public:
  virtual ~Actor() = default;
  virtual EditPayload Propose(Observation const& current,
                              RequirementSet const& reqs,
                              CheckerVerdict const& verdict,
                              std::uint64_t seed) const = 0;
};

struct Backends {
  std::shared_ptr<Generator const> generator;
  std::shared_ptr<Editor const> editor;
  std::shared_ptr<Checker const> checker;
  std::shared_ptr<Actor const> actor;
};

/// Requirements whose fix is `action`.
std::vector<Requirement> MentionedBy(EditAction const& action,
                                     RequirementSet const& reqs);

/// Comma-separated edit prompt for a list of actions.
std::string RenderEditPrompt(std::vector<EditAction> const& actions);

class SimGenerator : public Generator {
 public:
  explicit SimGenerator(GenSpec spec,
                        Vocabulary vocabulary = Vocabulary::Builtin());
  Observation Generate(RequirementSet const& reqs,
                       std::uint64_t seed) const override;

 private:
  GenSpec spec_;
  Vocabulary vocabulary_;
};

/// Applies a structured action directly. Without one, the editor acts on
/// a single clause of the prompt picked by the seed.
class SimEditor : public Editor {
 public:
  explicit SimEditor(EditorModel model);
  Observation Edit(Observation const& current, EditPayload const& payload,
                   std::uint64_t seed) const override;

 private:
  EditorModel model_;
};

class SimChecker : public Checker {
 public:
  CheckerVerdict Check(Observation const& current,
                       RequirementSet const& reqs) const override;
};

class SimActor : public Actor {
 public:
  explicit SimActor(ActorPolicy policy);
  EditPayload Propose(Observation const& current, RequirementSet const& reqs,
                      CheckerVerdict const& verdict,
                      std::uint64_t seed) const override;

 private:
  ActorPolicy policy_;
};

Backends MakeSimBackends(GenSpec const& spec, EditorModel const& editor,
                         ActorPolicy const& actor);

Observation ObserveWorld(WorldState world);

}  // namespace gre

#endif  // GRE_BACKENDS_H_
