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

#include "gre/metrics.h"

#include <algorithm>
#include <iomanip>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gre/error.h"

namespace gre {
namespace {

std::pair<std::size_t, std::size_t> OverlapCounts(
    std::set<std::string> const& a, std::set<std::string> const& b) {
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return {common.size(), a.size() + b.size() - common.size()};
}

double Iou(std::set<std::string> const& a, std::set<std::string> const& b) {
  auto [inter, uni] = OverlapCounts(a, b);
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::set<std::string> SgElements(SceneGraph const& g) {
  std::set<std::string> elements;
  for (auto const& key : g.EntityKeys()) elements.insert("e:" + key);
  for (auto const& key : g.TripletKeys()) elements.insert("t:" + key);
  return elements;
}

}  // namespace

double SgIou(SceneGraph const& reference, SceneGraph const& candidate) {
  return Iou(SgElements(reference), SgElements(candidate));
}

double EntIou(SceneGraph const& reference, SceneGraph const& candidate) {
  return Iou(reference.EntityKeys(), candidate.EntityKeys());
}

double RelIou(SceneGraph const& reference, SceneGraph const& candidate) {
  return Iou(reference.Predicates(), candidate.Predicates());
}

std::vector<bool> CheckerVerdictBits(SceneGraph const& graph,
                                     RequirementSet const& reqs,
                                     DescriptionJudge const& judge) {
  std::vector<bool> bits;
  bits.reserve(reqs.size());
  for (auto const& r : reqs.items) bits.push_back(Satisfies(graph, r, judge));
  return bits;
}

double CheckerScore(SceneGraph const& graph, RequirementSet const& reqs,
                    DescriptionJudge const& judge) {
  if (reqs.empty()) {
    throw Error(ErrorCode::kEmptyRequirements, "checker needs requirements");
  }
  auto bits = CheckerVerdictBits(graph, reqs, judge);
  auto satisfied = std::count(bits.begin(), bits.end(), true);
  return static_cast<double>(satisfied) / static_cast<double>(reqs.size());
}

MetricReport EvaluatePair(EvaluationPair const& pair) {
  MetricReport report;
  report.sg_iou = SgIou(pair.reference, pair.candidate);
  report.ent_iou = EntIou(pair.reference, pair.candidate);
  report.rel_iou = RelIou(pair.reference, pair.candidate);
  auto [inter, uni] =
      OverlapCounts(SgElements(pair.reference), SgElements(pair.candidate));
  report.counts.intersection = inter;
  report.counts.union_size = uni;
  auto bits = CheckerVerdictBits(pair.candidate, pair.reqs, pair.judge);
  report.counts.satisfied =
      static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
  report.counts.total = pair.reqs.size();
  report.checker_score = CheckerScore(pair.candidate, pair.reqs, pair.judge);
  return report;
}

MetricReport MeanReport(std::vector<MetricReport> const& reports) {
  if (reports.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no reports to aggregate");
  }
  MetricReport mean;
  for (auto const& r : reports) {
    mean.sg_iou += r.sg_iou;
    mean.ent_iou += r.ent_iou;
    mean.rel_iou += r.rel_iou;
    mean.checker_score += r.checker_score;
    mean.counts.intersection += r.counts.intersection;
    mean.counts.union_size += r.counts.union_size;
    mean.counts.satisfied += r.counts.satisfied;
    mean.counts.total += r.counts.total;
  }
  auto n = static_cast<double>(reports.size());
  mean.sg_iou /= n;
  mean.ent_iou /= n;
  mean.rel_iou /= n;
  mean.checker_score /= n;
  return mean;
}

MetricReport CorpusReport(std::vector<EvaluationPair> const& pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus report needs pairs");
  }
  std::vector<MetricReport> reports;
  reports.reserve(pairs.size());
  for (auto const& p : pairs) reports.push_back(EvaluatePair(p));
  return MeanReport(reports);
}

std::string RenderReportTable(ReportRows const& rows) {
  std::size_t width = 6;
  for (auto const& [name, report] : rows) width = std::max(width, name.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "Method"
      << "  SG-IoU  Ent-IoU  Rel-IoU  Checker\n";
  out << std::string(width + 36, '-') << "\n";
  out << std::fixed << std::setprecision(4);
  for (auto const& [name, r] : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << name << std::right
        << "  " << std::setw(6) << r.sg_iou << "  " << std::setw(7)
        << r.ent_iou << "  " << std::setw(7) << r.rel_iou << "  "
        << std::setw(7) << r.checker_score << "\n";
  }
  return out.str();
}

std::string RenderReportRecords(ReportRows const& rows) {
  std::string out;
  for (auto const& [name, r] : rows) {
    nlohmann::ordered_json record;
    record["method"] = name;
    record["sg_iou"] = r.sg_iou;
    record["ent_iou"] = r.ent_iou;
    record["rel_iou"] = r.rel_iou;
    record["checker_mean"] = r.checker_score;
    record["intersection"] = r.counts.intersection;
    record["union"] = r.counts.union_size;
    record["satisfied"] = r.counts.satisfied;
    record["total"] = r.counts.total;
    record["comparison"] = "exact-match after normalization";
    out += record.dump() + "\n";
  }
  return out;
}

}  // namespace gre
