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

#ifndef BIONER_TOOLS_RUN_CONTEXT_H_
#define BIONER_TOOLS_RUN_CONTEXT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace bioner::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitCheck = 3;

std::string ReadFile(const std::filesystem::path& path);

// Collects what a command read and wrote, then records it as
// <out>/manifest.json. Output files are written through this class so their
// digests land in the manifest.
class RunContext {
 public:
  RunContext(std::string command, std::vector<std::string> args,
             std::filesystem::path out_dir);

  const std::filesystem::path& out_dir() const { return out_dir_; }

  void AddInput(const std::string& path);
  // Options that determine the outputs; hashed into the manifest.
  void SetConfig(nlohmann::ordered_json config) { config_ = std::move(config); }
  void SetSeed(std::uint64_t seed) { seed_ = seed; }

  std::filesystem::path WriteOutput(const std::string& name,
                                    std::string_view content);
  // Registers a file produced by other means (already on disk).
  void RecordOutput(const std::string& name);

  void Finish();

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::filesystem::path out_dir_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::uint64_t seed_ = 0;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace bioner::cli

#endif  // BIONER_TOOLS_RUN_CONTEXT_H_
