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

#include "bioner/eval.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <memory>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "bioner/text.h"

namespace bioner {
namespace {

using json = nlohmann::ordered_json;

double Pct(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0
                  : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

// Predictions grouped per document, deduplicated and sorted.
using PredictionIndex =
    std::unordered_map<std::string, std::set<std::tuple<std::size_t, std::size_t, std::string>>>;

PredictionIndex IndexPredictions(const Corpus& gold,
                                 const std::vector<Prediction>& predictions) {
  std::unordered_set<std::string_view> known;
  for (const Document& d : gold.documents) known.insert(d.id);
  PredictionIndex index;
  for (const Prediction& p : predictions) {
    if (!known.contains(p.doc_id)) {
      throw Error("prediction references unknown document '" + p.doc_id + "'");
    }
    index[p.doc_id].emplace(p.start, p.end, p.type);
  }
  return index;
}

bool Matches(const PredictionIndex& index, const Document& doc,
             const Mention& m) {
  auto it = index.find(doc.id);
  return it != index.end() && it->second.contains({m.start, m.end, m.type});
}

json RatioJson(const Ratio& r) {
  json j;
  j["hits"] = r.hits;
  j["total"] = r.total;
  if (auto p = r.percent()) {
    j["recall"] = *p;
  } else {
    j["recall"] = nullptr;
  }
  return j;
}

Ratio RatioFromJson(const json& j) {
  return {j.at("hits").get<std::size_t>(), j.at("total").get<std::size_t>()};
}

std::string Cell(std::optional<double> v) {
  return v ? FormatPercent(*v) : std::string("-");
}

}  // namespace

EvalReport Evaluate(const Corpus& gold, const std::vector<Prediction>& predictions,
                    const SplitReport* splits) {
  const PredictionIndex index = IndexPredictions(gold, predictions);
  EvalReport report;
  std::array<Ratio, 3> per_split{};

  for (const Document& doc : gold.documents) {
    std::set<std::tuple<std::size_t, std::size_t, std::string>> gold_spans;
    for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
      const Mention& m = doc.mentions[i];
      gold_spans.emplace(m.start, m.end, m.type);
      const bool hit = Matches(index, doc, m);
      ++report.gold;
      if (hit) ++report.gold_hits;
      if (splits != nullptr) {
        const SplitAssignment* a = splits->Find(doc.id, i);
        if (a == nullptr) {
          throw Error("split report has no entry for mention " +
                      std::to_string(i) + " of document '" + doc.id + "'");
        }
        Ratio& r = per_split[static_cast<std::size_t>(a->split)];
        ++r.total;
        if (hit) ++r.hits;
      }
    }
    auto it = index.find(doc.id);
    if (it == index.end()) continue;
    report.predicted += it->second.size();
    for (const auto& span : it->second) {
      if (gold_spans.contains(span)) ++report.true_positives;
    }
  }

  report.precision = Pct(report.true_positives, report.predicted);
  report.recall = Pct(report.gold_hits, report.gold);
  const double sum = report.precision + report.recall;
  report.f1 = sum > 0.0 ? 2.0 * report.precision * report.recall / sum : 0.0;
  if (splits != nullptr) report.per_split = per_split;
  return report;
}

Ratio RelaxedRecall(const Corpus& corpus,
                    const std::vector<Prediction>& predictions,
                    std::string_view target, RelaxedMode mode) {
  if (target.empty()) throw Error("relaxed recall target must be non-empty");
  std::unordered_map<std::string_view, std::vector<const Prediction*>> by_doc;
  for (const Prediction& p : predictions) by_doc[p.doc_id].push_back(&p);

  Ratio ratio;
  for (const Document& doc : corpus.documents) {
    const auto it = by_doc.find(doc.id);
    for (std::size_t pos = doc.text.find(target); pos != std::string::npos;
         pos = doc.text.find(target, pos + target.size())) {
      ++ratio.total;
      if (it == by_doc.end()) continue;
      const std::size_t end = pos + target.size();
      const bool hit = std::any_of(
          it->second.begin(), it->second.end(), [&](const Prediction* p) {
            if (mode == RelaxedMode::kRangeContainment) {
              return p->start <= pos && end <= p->end;
            }
            if (p->end > doc.text.size() || p->start >= end || pos >= p->end) {
              return false;
            }
            return std::string_view(doc.text)
                       .substr(p->start, p->end - p->start)
                       .find(target) != std::string_view::npos;
          });
      if (hit) ++ratio.hits;
    }
  }
  return ratio;
}

bool IsAbbreviation(std::string_view s) {
  if (s.size() < 2 || s.size() > 8) return false;
  if (s.front() == '-' || s.back() == '-') return false;
  int upper = 0;
  for (unsigned char c : s) {
    if (IsAsciiUpper(c)) ++upper;
    if (!IsAsciiAlnum(c) && c != '-') return false;
  }
  return upper >= 2;
}

bool HasNameRegularity(std::string_view surface) {
  static const std::set<std::string, std::less<>> kHeads = {
      "disease", "diseases", "syndrome", "syndromes", "infection",
      "infections", "cancer", "cancers", "tumor", "tumors"};
  const std::string norm = NormalizeMention(surface);
  const std::size_t space = norm.rfind(' ');
  if (space == std::string::npos) return false;
  return kHeads.contains(std::string_view(norm).substr(space + 1));
}

MentionPredicate MakeSubsetPredicate(std::string_view spec) {
  if (spec == "abbreviation") {
    return [](const Mention& m) { return IsAbbreviation(m.surface); };
  }
  if (spec == "name_regularity") {
    return [](const Mention& m) { return HasNameRegularity(m.surface); };
  }
  constexpr std::string_view kSurfaces = "surfaces:";
  if (spec.starts_with(kSurfaces)) {
    const std::string path(spec.substr(kSurfaces.size()));
    std::ifstream in(path);
    if (!in) throw Error("cannot open surface list '" + path + "'");
    auto surfaces = std::make_shared<std::set<std::string, std::less<>>>();
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) surfaces->insert(line);
    }
    return [surfaces](const Mention& m) {
      return surfaces->contains(m.surface);
    };
  }
  throw Error("unknown subset predicate '" + std::string(spec) +
              "' (expected abbreviation, name_regularity or surfaces:<path>)");
}

Ratio SubsetRecall(const Corpus& gold, const std::vector<Prediction>& predictions,
                   const MentionPredicate& predicate, const SplitReport* splits,
                   std::optional<Split> only) {
  if (only && splits == nullptr) {
    throw Error("restricting a subset to a split needs a split report");
  }
  const PredictionIndex index = IndexPredictions(gold, predictions);
  Ratio ratio;
  for (const Document& doc : gold.documents) {
    for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
      const Mention& m = doc.mentions[i];
      if (only) {
        const SplitAssignment* a = splits->Find(doc.id, i);
        if (a == nullptr || a->split != *only) continue;
      }
      if (!predicate(m)) continue;
      ++ratio.total;
      if (Matches(index, doc, m)) ++ratio.hits;
    }
  }
  return ratio;
}

std::string EvalReportToJson(const EvalReport& r) {
  json j;
  j["name"] = r.name;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["counts"] = {{"true_positives", r.true_positives},
                 {"predicted", r.predicted},
                 {"gold", r.gold},
                 {"gold_hits", r.gold_hits}};
  if (r.per_split) {
    json splits;
    for (Split s : kAllSplits) {
      splits[std::string(ToString(s))] =
          RatioJson((*r.per_split)[static_cast<std::size_t>(s)]);
    }
    j["per_split_recall"] = std::move(splits);
  }
  if (r.relaxed) {
    json relaxed = RatioJson(r.relaxed->ratio);
    relaxed["target_surface"] = r.relaxed->target;
    j["relaxed"] = std::move(relaxed);
  }
  if (!r.subsets.empty()) {
    json subsets;
    for (const auto& [name, ratio] : r.subsets) subsets[name] = RatioJson(ratio);
    j["subsets"] = std::move(subsets);
  }
  return j.dump(2) + "\n";
}

EvalReport EvalReportFromJson(std::string_view text) {
  EvalReport r;
  try {
    const json j = json::parse(text);
    r.name = j.value("name", "");
    const json& c = j.at("counts");
    r.true_positives = c.at("true_positives").get<std::size_t>();
    r.predicted = c.at("predicted").get<std::size_t>();
    r.gold = c.at("gold").get<std::size_t>();
    r.gold_hits = c.at("gold_hits").get<std::size_t>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    if (j.contains("per_split_recall")) {
      std::array<Ratio, 3> splits{};
      for (Split s : kAllSplits) {
        splits[static_cast<std::size_t>(s)] =
            RatioFromJson(j["per_split_recall"].at(std::string(ToString(s))));
      }
      r.per_split = splits;
    }
    if (j.contains("relaxed")) {
      r.relaxed = RelaxedResult{
          j["relaxed"].at("target_surface").get<std::string>(),
          RatioFromJson(j["relaxed"])};
    }
    if (j.contains("subsets")) {
      for (const auto& [name, v] : j["subsets"].items()) {
        r.subsets[name] = RatioFromJson(v);
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("invalid eval report: ") + e.what());
  }
  return r;
}

std::string ComparisonMarkdown(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "| Metric |";
  for (const EvalReport& r : reports) out << ' ' << r.name << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < reports.size(); ++i) out << "---|";
  out << '\n';

  auto row = [&](std::string_view label, auto&& cell) {
    out << "| " << label << " |";
    for (const EvalReport& r : reports) out << ' ' << cell(r) << " |";
    out << '\n';
  };
  row("P", [](const EvalReport& r) { return FormatPercent(r.precision); });
  row("R", [](const EvalReport& r) { return FormatPercent(r.recall); });
  row("F1", [](const EvalReport& r) { return FormatPercent(r.f1); });
  for (Split s : kAllSplits) {
    row(ToString(s), [s](const EvalReport& r) {
      if (!r.per_split) return std::string("-");
      return Cell((*r.per_split)[static_cast<std::size_t>(s)].percent());
    });
  }
  std::set<std::string> targets;
  std::set<std::string> subsets;
  for (const EvalReport& r : reports) {
    if (r.relaxed) targets.insert(r.relaxed->target);
    for (const auto& [name, _] : r.subsets) subsets.insert(name);
  }
  for (const std::string& t : targets) {
    row(t + " (relaxed)", [&t](const EvalReport& r) {
      if (!r.relaxed || r.relaxed->target != t) return std::string("-");
      return Cell(r.relaxed->ratio.percent());
    });
  }
  for (const std::string& name : subsets) {
    row(name, [&name](const EvalReport& r) {
      auto it = r.subsets.find(name);
      return it == r.subsets.end() ? std::string("-")
                                   : Cell(it->second.percent());
    });
  }
  return out.str();
}

void WritePredictions(std::ostream& out, const std::vector<Prediction>& preds) {
  for (const Prediction& p : preds) {
    json j;
    j["doc_id"] = p.doc_id;
    j["start"] = p.start;
    j["end"] = p.end;
    j["type"] = p.type;
    out << j.dump() << '\n';
  }
}

std::vector<Prediction> ReadPredictions(std::istream& in) {
  std::vector<Prediction> preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      Prediction p{j.at("doc_id").get<std::string>(),
                   j.at("start").get<std::size_t>(),
                   j.at("end").get<std::size_t>(),
                   j.at("type").get<std::string>()};
      if (p.start >= p.end) throw ParseError("empty span");
      preds.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw ParseError("predictions line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return preds;
}

}  // namespace bioner
