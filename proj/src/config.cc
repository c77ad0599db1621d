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

#include "gre/config.h"

#include <fstream>
#include <sstream>
#include <thread>

#include "gre/error.h"
#include "gre/extraction.h"

namespace gre {
namespace {

using nlohmann::json;

json ParseJsonFile(std::filesystem::path const& path) {
  auto doc = json::parse(ReadFile(path), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kInvalidConfig,
                path.string() + " is not valid JSON");
  }
  return doc;
}

}  // namespace

std::string ReadFile(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(std::filesystem::path const& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<BatchItem> CorpusFromJson(json const& j) {
  json const& list = j.is_object() && j.contains("corpus") ? j["corpus"] : j;
  if (!list.is_array()) {
    throw Error(ErrorCode::kInvalidConfig, "corpus must be a list");
  }
  std::vector<BatchItem> items;
  for (auto const& entry : list) {
    try {
      BatchItem item;
      item.id = entry.at("id").get<std::string>();
      item.reqs = ParsePrompt(entry.at("prompt").get<std::string>());
      items.push_back(std::move(item));
    } catch (json::exception const& e) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("corpus entry: ") + e.what());
    }
  }
  return items;
}

std::vector<BatchItem> LoadCorpus(std::filesystem::path const& path) {
  return CorpusFromJson(ParseJsonFile(path));
}

std::vector<NamedPair> EvalCorpusFromJson(json const& j) {
  if (!j.is_object() || !j.contains("pairs") || !j["pairs"].is_array()) {
    throw Error(ErrorCode::kMalformedDocument,
                "evaluation corpus needs a \"pairs\" list");
  }
  std::vector<NamedPair> out;
  for (auto const& entry : j["pairs"]) {
    try {
      NamedPair named;
      named.id = entry.at("id").get<std::string>();
      named.pair.reqs = ParsePrompt(entry.at("prompt").get<std::string>());
      named.pair.reference = ParseExtractionDocument(entry.at("reference"));
      named.pair.candidate = ParseExtractionDocument(entry.at("candidate"));
      std::set<std::string> tags;
      for (auto const& t : entry.value("tags", json::array())) {
        tags.insert(NormalizeText(t.get<std::string>()));
      }
      named.pair.judge = TagJudge(tags);
      out.push_back(std::move(named));
    } catch (json::exception const& e) {
      throw Error(ErrorCode::kMalformedDocument,
                  std::string("evaluation pair: ") + e.what());
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "evaluation corpus is empty");
  }
  return out;
}

std::vector<NamedPair> LoadEvalCorpus(std::filesystem::path const& path) {
  auto doc = json::parse(ReadFile(path), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kMalformedDocument,
                path.string() + " is not valid JSON");
  }
  return EvalCorpusFromJson(doc);
}

std::vector<std::pair<std::string, RequirementSet>> AsTrainingCorpus(
    std::vector<BatchItem> const& items) {
  std::vector<std::pair<std::string, RequirementSet>> out;
  for (auto const& i : items) out.emplace_back(i.id, i.reqs);
  return out;
}

ActorPolicy RunConfig::InitialActor() const {
  auto actor = ActorPolicy::WithNoopBias(noop_bias);
  actor.temperature = temperature;
  return actor;
}

int RunConfig::EffectiveParallelism() const {
  if (parallelism > 0) return parallelism;
  return std::max(1u, std::thread::hardware_concurrency());
}

void RunConfig::Validate() const {
  genspec.Validate();
  editor.Validate();
  InitialActor().Validate();
  episode.Validate();
  phase1.Validate();
  phase2.Validate();
  if (backend != "sim" && backend != "remote") {
    throw Error(ErrorCode::kInvalidConfig,
                "backend must be 'sim' or 'remote', got '" + backend + "'");
  }
  if (backend == "remote") {
    for (auto const* e : {&endpoints.generator, &endpoints.editor,
                          &endpoints.checker, &endpoints.actor}) {
      e->Validate();
      if (e->base_url.empty()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "remote backend needs every endpoint base_url");
      }
    }
  }
  if (parallelism < 0) {
    throw Error(ErrorCode::kInvalidConfig, "parallelism must be >= 0");
  }
  if (pool_size == 0) {
    throw Error(ErrorCode::kInvalidConfig, "pool_size must be > 0");
  }
}

nlohmann::ordered_json RunConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["genspec"] = gre::ToJson(genspec);
  j["editor"] = gre::ToJson(editor);
  j["initial_actor"] = {{"noop_bias", noop_bias}, {"temperature", temperature}};
  j["episode"] = gre::ToJson(episode);
  j["phase1"] = gre::ToJson(phase1);
  j["phase2"] = gre::ToJson(phase2);
  j["pool_size"] = pool_size;
  j["backend"] = backend;
  j["endpoints"] = {{"generator", gre::ToJson(endpoints.generator)},
                    {"editor", gre::ToJson(endpoints.editor)},
                    {"checker", gre::ToJson(endpoints.checker)},
                    {"actor", gre::ToJson(endpoints.actor)}};
  // `out` and `parallelism` are left out: they never change results, and
  // leaving them out keeps persisted configs comparable across reruns.
  if (!corpus_path.empty()) j["corpus_path"] = corpus_path;
  auto& list = j["corpus"] = nlohmann::ordered_json::array();
  for (auto const& item : corpus) {
    list.push_back({{"id", item.id}, {"prompt", RenderPrompt(item.reqs)}});
  }
  return j;
}

RunConfig RunConfig::FromJson(json const& j,
                              std::filesystem::path const& base_dir) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
  }
  RunConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    if (j.contains("genspec")) c.genspec = GenSpecFromJson(j["genspec"]);
    if (j.contains("editor")) c.editor = EditorModelFromJson(j["editor"]);
    if (j.contains("initial_actor")) {
      auto const& a = j["initial_actor"];
      c.noop_bias = a.value("noop_bias", c.noop_bias);
      c.temperature = a.value("temperature", c.temperature);
    }
    if (j.contains("episode")) {
      c.episode = EpisodeConfigFromJson(j["episode"], c.episode);
    }
    if (j.contains("phase1")) {
      c.phase1 = GrpoConfigFromJson(j["phase1"], c.phase1);
    }
    if (j.contains("phase2")) {
      c.phase2 = GrpoConfigFromJson(j["phase2"], c.phase2);
    }
    c.pool_size = j.value("pool_size", c.pool_size);
    c.backend = j.value("backend", c.backend);
    if (j.contains("endpoints")) {
      auto const& e = j["endpoints"];
      auto read = [&](char const* key, BackendEndpoint& dst) {
        if (e.contains(key)) dst = BackendEndpointFromJson(e[key], dst);
      };
      read("generator", c.endpoints.generator);
      read("editor", c.endpoints.editor);
      read("checker", c.endpoints.checker);
      read("actor", c.endpoints.actor);
    }
    c.out = j.value("out", c.out);
    c.parallelism = j.value("parallelism", c.parallelism);
    if (j.contains("corpus")) {
      if (j["corpus"].is_string()) {
        std::filesystem::path p = j["corpus"].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        c.corpus = LoadCorpus(p);
        c.corpus_path = p.string();
      } else {
        c.corpus = CorpusFromJson(j["corpus"]);
      }
    }
  } catch (json::exception const& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  c.Validate();
  return c;
}

RunConfig RunConfig::Load(std::filesystem::path const& path) {
  return FromJson(ParseJsonFile(path), path.parent_path());
}

}  // namespace gre
