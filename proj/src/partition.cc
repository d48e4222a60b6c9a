//
// Copyright 2026 The bioner-gen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "bioner/partition.h"

#include <cstdio>

#include "json.hpp"
#include "bioner/parallel.h"
#include "bioner/text.h"

namespace bioner {

using json = nlohmann::ordered_json;

std::string_view ToString(Split split) {
  switch (split) {
    case Split::kMem:
      return "MEM";
    case Split::kSyn:
      return "SYN";
    case Split::kCon:
      return "CON";
  }
  return "CON";
}

Split SplitFromString(std::string_view s) {
  if (s == "MEM") return Split::kMem;
  if (s == "SYN") return Split::kSyn;
  if (s == "CON") return Split::kCon;
  throw Error("unknown split '" + std::string(s) + "'");
}

TrainSets BuildTrainSets(const Corpus& train) {
  if (train.role != SplitRole::kTrain) {
    throw Error("training sets must be built from a train-role corpus");
  }
  TrainSets sets;
  for (const Document& doc : train.documents) {
    for (const Mention& m : doc.mentions) {
      std::string key = NormalizeMention(m.surface);
      if (!key.empty()) sets.mentions.insert(std::move(key));
      for (const std::string& cui : m.cuis) {
        if (cui != kUnknownCui) sets.cuis.insert(cui);
      }
    }
  }
  if (sets.mentions.empty()) throw Error("training corpus has no mentions");
  return sets;
}

DatasetKind DatasetKindOf(const Corpus& train, const Corpus& eval) {
  std::set<std::string> types = train.entity_types;
  types.insert(eval.entity_types.begin(), eval.entity_types.end());
  return types.size() <= 1 ? DatasetKind::kSingleType
                           : DatasetKind::kMultiType;
}

SplitDecision AssignSplit(const Mention& mention, const TrainSets& train,
                          DatasetKind kind) {
  if (mention.HasOnlyUnknownCui()) return {Split::kCon, "unknown_cui"};

  const std::string key = NormalizeMention(mention.surface);
  const bool surface_hit = !key.empty() && train.mentions.contains(key);
  std::size_t cui_hits = 0;
  for (const std::string& cui : mention.cuis) {
    if (train.cuis.contains(cui)) ++cui_hits;
  }
  const bool partial = cui_hits > 0 && cui_hits < mention.cuis.size();

  if (surface_hit) {
    if (cui_hits > 0) {
      return {Split::kMem, partial ? "surface_hit+multi_cui_partial"
                                   : "surface_hit+cui_hit"};
    }
    if (kind == DatasetKind::kSingleType) {
      return {Split::kMem, "surface_hit+cui_miss:single_type"};
    }
    return {Split::kCon, "surface_hit+cui_miss:multi_type"};
  }
  if (cui_hits > 0) {
    return {Split::kSyn, partial ? "surface_miss+multi_cui_partial"
                                 : "surface_miss+cui_hit"};
  }
  return {Split::kCon, "surface_miss+cui_miss"};
}

double SplitReport::Percent(Split s) const {
  const std::size_t n = total();
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(count(s)) /
                            static_cast<double>(n);
}

const SplitAssignment* SplitReport::Find(std::string_view doc_id,
                                         std::size_t mention_index) const {
  for (const SplitAssignment& a : assignments) {
    if (a.doc_id == doc_id && a.mention_index == mention_index) return &a;
  }
  return nullptr;
}

SplitReport PartitionCorpus(const Corpus& eval, const TrainSets& train,
                            DatasetKind kind, int threads) {
  if (eval.role == SplitRole::kTrain) {
    throw Error("partitioning expects a dev or test corpus");
  }
  std::vector<std::vector<SplitAssignment>> per_doc(eval.documents.size());
  ParallelFor(eval.documents.size(), threads, [&](std::size_t d) {
    const Document& doc = eval.documents[d];
    auto& out = per_doc[d];
    out.reserve(doc.mentions.size());
    for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
      const Mention& m = doc.mentions[i];
      SplitDecision decision = AssignSplit(m, train, kind);
      out.push_back({doc.id, i, m.start, m.end, m.surface, decision.split,
                     std::move(decision.reason)});
    }
  });

  SplitReport report;
  report.role = eval.role;
  for (auto& doc_assignments : per_doc) {
    for (SplitAssignment& a : doc_assignments) {
      ++report.counts[static_cast<std::size_t>(a.split)];
      ++report.reason_counts[a.reason];
      report.assignments.push_back(std::move(a));
    }
  }
  return report;
}

std::string FormatPercent(double percent) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", percent);
  return buf;
}

std::string SplitReportToJson(const SplitReport& report) {
  json j;
  j["dataset"] = report.dataset;
  j["role"] = std::string(ToString(report.role));
  j["total"] = report.total();
  json counts;
  json percents;
  for (Split s : kAllSplits) {
    counts[std::string(ToString(s))] = report.count(s);
    percents[std::string(ToString(s))] =
        std::stod(FormatPercent(report.Percent(s)));
  }
  j["counts"] = std::move(counts);
  j["percent"] = std::move(percents);
  j["reasons"] = report.reason_counts;
  json rows = json::array();
  for (const SplitAssignment& a : report.assignments) {
    rows.push_back({{"doc_id", a.doc_id},
                    {"mention", a.mention_index},
                    {"start", a.start},
                    {"end", a.end},
                    {"surface", a.surface},
                    {"split", std::string(ToString(a.split))},
                    {"reason", a.reason}});
  }
  j["assignments"] = std::move(rows);
  return j.dump(2) + "\n";
}

SplitReport SplitReportFromJson(std::string_view text) {
  SplitReport report;
  try {
    const json j = json::parse(text);
    report.dataset = j.value("dataset", "");
    report.role = SplitRoleFromString(j.value("role", "test"));
    for (const json& row : j.at("assignments")) {
      SplitAssignment a;
      a.doc_id = row.at("doc_id").get<std::string>();
      a.mention_index = row.at("mention").get<std::size_t>();
      a.start = row.at("start").get<std::size_t>();
      a.end = row.at("end").get<std::size_t>();
      a.surface = row.at("surface").get<std::string>();
      a.split = SplitFromString(row.at("split").get<std::string>());
      a.reason = row.at("reason").get<std::string>();
      ++report.counts[static_cast<std::size_t>(a.split)];
      ++report.reason_counts[a.reason];
      report.assignments.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("invalid split report: ") + e.what());
  }
  return report;
}

std::string SplitReportMarkdown(const std::vector<SplitReport>& reports) {
  // One row per dataset; dev and test columns are filled from the reports
  // carrying that role.
  std::map<std::string, std::map<SplitRole, const SplitReport*>> rows;
  std::vector<std::string> order;
  for (const SplitReport& r : reports) {
    if (!rows.contains(r.dataset)) order.push_back(r.dataset);
    rows[r.dataset][r.role] = &r;
  }
  std::string out =
      "| Dataset | Dev MEM | Dev SYN | Dev CON | Test MEM | Test SYN | "
      "Test CON |\n|---|---|---|---|---|---|---|\n";
  for (const std::string& name : order) {
    out += "| " + name + " |";
    for (SplitRole role : {SplitRole::kDev, SplitRole::kTest}) {
      auto it = rows[name].find(role);
      for (Split s : kAllSplits) {
        if (it == rows[name].end()) {
          out += " - |";
        } else {
          out += " " + std::to_string(it->second->count(s)) + " (" +
                 FormatPercent(it->second->Percent(s)) + "%) |";
        }
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace bioner
