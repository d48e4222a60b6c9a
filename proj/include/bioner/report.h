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

#ifndef BIONER_REPORT_H_
#define BIONER_REPORT_H_

#include <string>
#include <string_view>
#include <vector>

namespace bioner {

// One numeric comparison against a golden file.
struct GoldenCheck {
  std::string key;  // dotted path into the actual JSON, e.g. "counts.MEM"
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool found = false;
  bool pass = false;
};

// Golden files look like
//   {"tolerance": 0.05, "values": {"counts.MEM": 599,
//                                  "recall": {"value": 55.4, "tolerance": 2}}}
// Array elements are addressed by index ("rows.0.f1"). A missing key fails.
std::vector<GoldenCheck> CheckGolden(std::string_view actual_json,
                                     std::string_view golden_json);

std::string FormatGoldenChecks(const std::vector<GoldenCheck>& checks);

// Reads `eval.json` from each run directory (falling back to any
// `*.eval.json` inside it) and renders the merged comparison. Column names
// come from each report's name, or the directory name when empty.
struct MergedReport {
  std::string markdown;
  std::string json;
};
MergedReport MergeRunDirectories(const std::vector<std::string>& dirs);

}  // namespace bioner

#endif  // BIONER_REPORT_H_
