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

#include "bioner/report.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "bioner/corpus.h"
#include "bioner/eval.h"

namespace bioner {
namespace {

using json = nlohmann::ordered_json;

const json* Lookup(const json& root, std::string_view path) {
  const json* node = &root;
  while (!path.empty()) {
    const std::size_t dot = path.find('.');
    const std::string part(path.substr(0, dot));
    path = dot == std::string_view::npos ? std::string_view{}
                                         : path.substr(dot + 1);
    if (node->is_object()) {
      auto it = node->find(part);
      if (it == node->end()) return nullptr;
      node = &*it;
    } else if (node->is_array()) {
      char* end = nullptr;
      const unsigned long index = std::strtoul(part.c_str(), &end, 10);
      if (end == part.c_str() || *end != '\0' || index >= node->size()) {
        return nullptr;
      }
      node = &(*node)[index];
    } else {
      return nullptr;
    }
  }
  return node;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<GoldenCheck> CheckGolden(std::string_view actual_json,
                                     std::string_view golden_json) {
  json actual;
  json golden;
  try {
    actual = json::parse(actual_json);
    golden = json::parse(golden_json);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON in golden check: ") + e.what());
  }
  const double default_tol = golden.value("tolerance", 0.0);
  if (!golden.contains("values") || !golden["values"].is_object()) {
    throw Error("golden file needs a \"values\" object");
  }
  std::vector<GoldenCheck> checks;
  for (const auto& [key, spec] : golden["values"].items()) {
    GoldenCheck c;
    c.key = key;
    if (spec.is_object()) {
      c.expected = spec.at("value").get<double>();
      c.tolerance = spec.value("tolerance", default_tol);
    } else {
      c.expected = spec.get<double>();
      c.tolerance = default_tol;
    }
    const json* node = Lookup(actual, key);
    c.found = node != nullptr && node->is_number();
    if (c.found) {
      c.actual = node->get<double>();
      c.pass = std::abs(c.actual - c.expected) <= c.tolerance + 1e-9;
    }
    checks.push_back(std::move(c));
  }
  return checks;
}

std::string FormatGoldenChecks(const std::vector<GoldenCheck>& checks) {
  std::string out;
  char line[256];
  for (const GoldenCheck& c : checks) {
    if (c.found) {
      std::snprintf(line, sizeof(line), "%s %s: expected %.4g, got %.4g (tol %.3g)\n",
                    c.pass ? "ok  " : "FAIL", c.key.c_str(), c.expected, c.actual,
                    c.tolerance);
    } else {
      std::snprintf(line, sizeof(line), "FAIL %s: missing from output\n",
                    c.key.c_str());
    }
    out += line;
  }
  return out;
}

MergedReport MergeRunDirectories(const std::vector<std::string>& dirs) {
  namespace fs = std::filesystem;
  std::vector<EvalReport> reports;
  json all = json::array();
  for (const std::string& dir : dirs) {
    std::vector<fs::path> files;
    if (fs::is_regular_file(fs::path(dir) / "eval.json")) {
      files.push_back(fs::path(dir) / "eval.json");
    } else if (fs::is_directory(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 10 && name.ends_with(".eval.json")) {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
    }
    if (files.empty()) throw Error("no eval report in '" + dir + "'");
    for (const fs::path& file : files) {
      EvalReport r = EvalReportFromJson(ReadFile(file));
      if (r.name.empty()) r.name = fs::path(dir).filename().string();
      all.push_back(json::parse(EvalReportToJson(r)));
      reports.push_back(std::move(r));
    }
  }
  return {ComparisonMarkdown(reports), all.dump(2) + "\n"};
}

}  // namespace bioner
