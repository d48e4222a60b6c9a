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

#include "run_context.h"

#include <fstream>
#include <sstream>

#include "bioner/corpus.h"
#include "bioner/hash.h"

namespace bioner::cli {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunContext::RunContext(std::string command, std::vector<std::string> args,
                       fs::path out_dir)
    : command_(std::move(command)),
      args_(std::move(args)),
      out_dir_(std::move(out_dir)),
      started_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  fs::create_directories(out_dir_, ec);
  if (ec) {
    throw Error("cannot create output directory '" + out_dir_.string() +
                "': " + ec.message());
  }
}

void RunContext::AddInput(const std::string& path) {
  inputs_.push_back({{"path", path},
                     {"fnv1a64", HexDigest(Fnv1a64(ReadFile(path)))}});
}

fs::path RunContext::WriteOutput(const std::string& name,
                                 std::string_view content) {
  const fs::path path = out_dir_ / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
  outputs_[name] = HexDigest(Fnv1a64(content));
  return path;
}

void RunContext::RecordOutput(const std::string& name) {
  outputs_[name] = HexDigest(Fnv1a64(ReadFile(out_dir_ / name)));
}

void RunContext::Finish() {
  nlohmann::ordered_json m;
  m["command"] = command_;
  m["args"] = args_;
  m["inputs"] = inputs_;
  m["config"] = config_;
  m["config_hash"] = HexDigest(Fnv1a64(config_.dump()));
  m["seed"] = seed_;
  m["version"] = BIONER_VERSION;
  m["outputs"] = outputs_;
  m["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_)
          .count();
  std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw Error("cannot write manifest in '" + out_dir_.string() + "'");
}

}  // namespace bioner::cli
