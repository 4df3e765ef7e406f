// Copyright 2026 The swarm-econ Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/error.hpp"

namespace swarm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 4;

int exit_code_for(Errc code);

struct RunManifest {
  std::string command;
  std::string config_text;  // effective config, exactly as written next to the manifest
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::pair<std::string, std::filesystem::path>> artifacts;
  std::string version;

  std::string to_json() const;
};

std::string tool_version();

// Writes the default config. Throws exists_without_force if path exists.
void cmd_init(const std::filesystem::path& path, bool force);

// Every command below writes into out_dir (created if missing) and finishes by
// writing out_dir/manifest.json.
RunManifest cmd_train(const SimConfig& config, const std::filesystem::path& out_dir);
RunManifest cmd_eval(const SimConfig& config, const std::filesystem::path& checkpoint,
                     const std::filesystem::path& out_dir);
// Prints the ratio table to `table`.
RunManifest cmd_compare(const SimConfig& config, const std::filesystem::path& out_dir,
                        std::ostream& table);

// One greedy episode on the evaluation world of config.run.seed.
void cmd_trace(const SimConfig& config, const std::filesystem::path& checkpoint,
               std::ostream& out);
// JSON summary of a checkpoint directory or a single table file.
std::string cmd_inspect(const std::filesystem::path& path);

inline constexpr const char* kRatioCsvHeader = "basis,metric,economic,baseline,ratio";

// Full command line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swarm::cli
