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

#include "gre/vocabulary.h"

#include <json.hpp>

#include "gre/error.h"
#include "gre/vocabulary_data.h"

namespace gre {

Vocabulary const& Vocabulary::Builtin() {
  static Vocabulary const vocabulary = FromJson(detail::kVocabularyJson);
  return vocabulary;
}

Vocabulary Vocabulary::FromJson(std::string_view text) {
  auto doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_object() || !doc.contains("entities") ||
      !doc.contains("predicates")) {
    throw Error(ErrorCode::kMalformedDocument,
                "vocabulary needs 'entities' and 'predicates'");
  }
  Vocabulary v;
  try {
    v.entities = doc.at("entities").get<std::vector<std::string>>();
    v.predicates = doc.at("predicates").get<std::vector<std::string>>();
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  if (v.entities.size() < 2 || v.predicates.empty()) {
    throw Error(ErrorCode::kMalformedDocument,
                "vocabulary needs at least two entities and one predicate");
  }
  return v;
}

}  // namespace gre
