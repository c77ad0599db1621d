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

#ifndef GRE_EXTRACTION_H_
#define GRE_EXTRACTION_H_

#include <string>
#include <string_view>

#include <json.hpp>

#include "gre/scene_graph.h"

namespace gre {

/// Parses a scene-graph extraction document (text or already-parsed JSON):
///
///   {"scene_graph": [["subject", "predicate", "object"], ...],
///    "object_list": ["object1", ...],
///    "predicate_list": ["predicate1", ...]}
///
/// Entities are the union of `object_list` and triplet endpoints; endpoints
/// missing from `object_list` are added rather than rejected. Duplicate
/// triplets collapse. `predicate_list` is validated but carries no graph
/// content of its own. Throws kMalformedDocument on a missing key, a
/// non-string element, an empty label, or a triplet whose arity is not 3.
SceneGraph ParseExtractionText(std::string_view text);
SceneGraph ParseExtractionDocument(nlohmann::json const& doc);

/// Canonical document for `graph`: keys in the order above, triplets and
/// objects in canonical order, predicate_list = predicates used by triplets.
nlohmann::ordered_json ExtractionJson(SceneGraph const& graph);

/// ExtractionJson(graph) dumped with a 4-space indent. Parsing the result
/// and rendering again reproduces the same bytes.
std::string RenderExtractionDocument(SceneGraph const& graph);

}  // namespace gre

#endif  // GRE_EXTRACTION_H_
