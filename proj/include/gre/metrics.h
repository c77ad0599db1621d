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

#ifndef GRE_METRICS_H_
#define GRE_METRICS_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gre/requirements.h"
#include "gre/scene_graph.h"

namespace gre {

/// Scene-graph IoU over entity keys and triplet keys together. Exact match
/// after normalization; attributes are part of the entity key. Both graphs
/// empty gives 1.
double SgIou(SceneGraph const& reference, SceneGraph const& candidate);

/// IoU over entity keys; 1 when both sides are empty.
double EntIou(SceneGraph const& reference, SceneGraph const& candidate);

/// IoU over the predicates used by triplets; 1 when neither side has any.
double RelIou(SceneGraph const& reference, SceneGraph const& candidate);

/// Per-requirement satisfaction of `graph`.
std::vector<bool> CheckerVerdictBits(SceneGraph const& graph,
                                     RequirementSet const& reqs,
                                     DescriptionJudge const& judge = {});

/// Fraction of satisfied requirements. Throws kEmptyRequirements.
double CheckerScore(SceneGraph const& graph, RequirementSet const& reqs,
                    DescriptionJudge const& judge = {});

struct MetricCounts {
  std::size_t intersection = 0;  // |Q ∩ Q'| over SG elements
  std::size_t union_size = 0;    // |Q ∪ Q'|
  std::size_t satisfied = 0;
  std::size_t total = 0;
};

struct MetricReport {
  double sg_iou = 0;
  double ent_iou = 0;
  double rel_iou = 0;
  double checker_score = 0;
  MetricCounts counts;
};

struct EvaluationPair {
  SceneGraph reference;
  SceneGraph candidate;
  RequirementSet reqs;
  DescriptionJudge judge;  // decides Description requirements
};

MetricReport EvaluatePair(EvaluationPair const& pair);

/// Arithmetic mean of each ratio over the pairs; counts are summed.
/// Throws kEmptyCorpus on an empty list.
MetricReport CorpusReport(std::vector<EvaluationPair> const& pairs);
MetricReport MeanReport(std::vector<MetricReport> const& reports);

/// One named row per configuration.
using ReportRows = std::vector<std::pair<std::string, MetricReport>>;

/// Aligned plain-text table: Method, SG-IoU, Ent-IoU, Rel-IoU, Checker.
std::string RenderReportTable(ReportRows const& rows);

/// One JSON object per line, same columns plus counts.
std::string RenderReportRecords(ReportRows const& rows);

}  // namespace gre

#endif  // GRE_METRICS_H_
