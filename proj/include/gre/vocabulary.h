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

#ifndef GRE_VOCABULARY_H_
#define GRE_VOCABULARY_H_

#include <string>
#include <string_view>
#include <vector>

namespace gre {

/// Fixed distractor vocabulary of the simulator.
struct Vocabulary {
  std::vector<std::string> entities;
  std::vector<std::string> predicates;

  /// Contents of data/vocabulary.json, embedded at build time.
  static Vocabulary const& Builtin();

  /// Parses {"entities": [...], "predicates": [...]}.
  static Vocabulary FromJson(std::string_view text);
};

}  // namespace gre

#endif  // GRE_VOCABULARY_H_
