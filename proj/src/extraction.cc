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

#include "gre/extraction.h"

#include "gre/error.h"

namespace gre {
namespace {

std::string const& RequireString(nlohmann::json const& value,
                                 char const* where) {
  if (!value.is_string()) {
    throw Error(ErrorCode::kMalformedDocument,
                std::string("non-string element in ") + where);
  }
  return value.get_ref<std::string const&>();
}

nlohmann::json const& RequireArray(nlohmann::json const& doc,
                                   char const* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorCode::kMalformedDocument,
                std::string("missing key '") + key + "'");
  }
  if (!it->is_array()) {
    throw Error(ErrorCode::kMalformedDocument,
                std::string("'") + key + "' is not an array");
  }
  return *it;
}

Entity ParseEntity(std::string const& text) {
  try {
    return Entity::FromPhrase(text);
  } catch (Error const& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
}

}  // namespace

SceneGraph ParseExtractionDocument(nlohmann::json const& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, "document is not an object");
  }
  auto const& triplets = RequireArray(doc, "scene_graph");
  auto const& objects = RequireArray(doc, "object_list");
  auto const& predicates = RequireArray(doc, "predicate_list");

  SceneGraph graph;
  for (auto const& o : objects) {
    graph.AddEntity(ParseEntity(RequireString(o, "object_list")));
  }
  for (auto const& p : predicates) {
    if (NormalizeText(RequireString(p, "predicate_list")).empty()) {
      throw Error(ErrorCode::kMalformedDocument, "empty predicate");
    }
  }
  for (auto const& t : triplets) {
    if (!t.is_array() || t.size() != 3) {
      throw Error(ErrorCode::kMalformedDocument,
                  "triplet must be a 3-element array, got " + t.dump());
    }
    auto predicate = NormalizeText(RequireString(t[1], "scene_graph"));
    if (predicate.empty()) {
      throw Error(ErrorCode::kMalformedDocument, "empty predicate");
    }
    graph.AddTriplet(Triplet(ParseEntity(RequireString(t[0], "scene_graph")),
                             predicate,
                             ParseEntity(RequireString(t[2], "scene_graph"))));
  }
  return graph;
}

SceneGraph ParseExtractionText(std::string_view text) {
  auto doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kMalformedDocument, "document is not valid JSON");
  }
  return ParseExtractionDocument(doc);
}

nlohmann::ordered_json ExtractionJson(SceneGraph const& graph) {
  nlohmann::ordered_json doc;
  doc["scene_graph"] = nlohmann::ordered_json::array();
  for (auto const& t : graph.triplets()) {
    doc["scene_graph"].push_back(
        {t.subject().key(), t.predicate(), t.object().key()});
  }
  doc["object_list"] = nlohmann::ordered_json::array();
  for (auto const& [key, entity] : graph.entities()) {
    doc["object_list"].push_back(key);
  }
  doc["predicate_list"] = nlohmann::ordered_json::array();
  for (auto const& p : graph.Predicates()) doc["predicate_list"].push_back(p);
  return doc;
}

std::string RenderExtractionDocument(SceneGraph const& graph) {
  return ExtractionJson(graph).dump(4);
}

}  // namespace gre
