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

#ifndef GRE_TESTS_TEST_UTIL_H_
#define GRE_TESTS_TEST_UTIL_H_

#include <random>
#include <string>
#include <vector>

#include "gre/scene_graph.h"

namespace gre::testing {

inline std::string DataPath(std::string const& name) {
  return std::string(GRE_DATA_DIR) + "/" + name;
}

// Small label/predicate alphabets so random graphs overlap often.
inline std::vector<std::string> const& TestLabels() {
  static std::vector<std::string> const labels = {
      "cat", "dog", "red ball", "mat", "old tree", "bench", "lamp", "tall tree"};
  return labels;
}

inline std::vector<std::string> const& TestPredicates() {
  static std::vector<std::string> const predicates = {"on", "near", "under",
                                                      "next to", "behind"};
  return predicates;
}

inline SceneGraph RandomGraph(std::mt19937_64& rng, int max_entities = 5,
                              int max_triplets = 5) {
  auto const& labels = TestLabels();
  auto const& preds = TestPredicates();
  std::uniform_int_distribution<std::size_t> label(0, labels.size() - 1);
  std::uniform_int_distribution<std::size_t> pred(0, preds.size() - 1);
  std::uniform_int_distribution<int> ne(0, max_entities);
  std::uniform_int_distribution<int> nt(0, max_triplets);
  SceneGraph g;
  for (int i = ne(rng); i > 0; --i) g.AddEntity(Entity::FromPhrase(labels[label(rng)]));
  for (int i = nt(rng); i > 0; --i) {
    g.AddTriplet(Triplet::FromStrings(labels[label(rng)], preds[pred(rng)],
                                      labels[label(rng)]));
  }
  return g;
}

}  // namespace gre::testing

#endif  // GRE_TESTS_TEST_UTIL_H_
