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

// Argument handling for the swarm tool. Every config key is exposed as
// --section.key; a few short aliases cover the common knobs.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "swarm/cli/commands.hpp"

namespace swarm::cli {

namespace fs = std::filesystem;

namespace {

void setup_logging() {
  auto logger = spdlog::get("swarm");
  if (!logger) {
    logger = spdlog::stderr_color_mt("swarm");
    logger->set_pattern("[%l] %v");
  }
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("SWARM_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
    if (level != "info") spdlog::warn("unknown SWARM_LOG value '{}', using info", level);
  }
}

// Config-bearing options shared by train/eval/compare/trace.
struct ConfigOptions {
  std::string config_path;
  std::deque<std::pair<std::string, std::optional<std::string>>> keyed;  // deque: stable addresses
  std::optional<std::string> mode, auction_mode;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes, steps, iterations;
  bool fixed_world = false;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "config file (defaults if omitted)");
    for (const auto& key : config_keys()) {
      auto& slot = keyed.emplace_back(key, std::nullopt);
      app->add_option("--" + key, slot.second)->group("Config overrides");
    }
    app->add_option("--mode", mode, "economic | baseline")->group("Aliases");
    app->add_option("--seed", seed, "root seed")->group("Aliases");
    app->add_option("--episodes", episodes, "episodes per iteration")->group("Aliases");
    app->add_option("--steps", steps, "steps per episode")->group("Aliases");
    app->add_option("--iterations", iterations, "training iterations")->group("Aliases");
    app->add_option("--auction-mode", auction_mode, "price | distance")->group("Aliases");
    app->add_flag("--fixed-world", fixed_world, "keep one world layout for every episode")
        ->group("Aliases");
  }

  SimConfig build() const {
    SimConfig c = config_path.empty() ? SimConfig{} : load_config(config_path);
    for (const auto& [key, value] : keyed)
      if (value) apply_override(c, key, *value);
    if (mode) apply_override(c, "run.mode", *mode);
    if (auction_mode) apply_override(c, "economy.auction_mode", *auction_mode);
    if (seed) c.run.seed = *seed;
    if (episodes) c.learner.episodes_per_iteration = *episodes;
    if (steps) c.learner.steps_per_episode = *steps;
    if (iterations) c.run.iterations = *iterations;
    if (fixed_world) c.world.fixed_world = true;
    validate(c);
    return c;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging();
  CLI::App app{"Economic multi-agent Q-learning for UAV point-of-interest coverage", "swarm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  std::string init_path;
  bool force = false;
  auto* init = app.add_subcommand("init", "write a default config file");
  init->add_option("path", init_path, "destination")->required();
  init->add_flag("--force", force, "overwrite an existing file");

  ConfigOptions train_opts, eval_opts, compare_opts, trace_opts;
  std::string out_dir, checkpoint, trace_out, inspect_path;

  auto* train = app.add_subcommand("train", "train Q-tables and write episode metrics");
  train_opts.attach(train);
  train->add_option("-o,--out", out_dir, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  eval_opts.attach(eval);
  eval->add_option("--checkpoint", checkpoint, "checkpoint directory")->required();
  eval->add_option("-o,--out", out_dir, "output directory")->required();

  auto* compare = app.add_subcommand("compare", "train both modes and print metric ratios");
  compare_opts.attach(compare);
  compare->add_option("-o,--out", out_dir, "output directory")->required();

  auto* trace = app.add_subcommand("trace", "trace one greedy episode from a checkpoint");
  trace_opts.attach(trace);
  trace->add_option("--checkpoint", checkpoint, "checkpoint directory")->required();
  trace->add_option("-o,--out", trace_out, "trace CSV path (stdout if omitted)");

  auto* inspect = app.add_subcommand("inspect", "summarize a checkpoint or table file");
  inspect->add_option("path", inspect_path, "checkpoint directory or .qtb file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*init) {
      cmd_init(init_path, force);
    } else if (*train) {
      cmd_train(train_opts.build(), out_dir);
    } else if (*eval) {
      cmd_eval(eval_opts.build(), checkpoint, out_dir);
    } else if (*compare) {
      cmd_compare(compare_opts.build(), out_dir, out);
    } else if (*trace) {
      const SimConfig c = trace_opts.build();
      if (trace_out.empty()) {
        cmd_trace(c, checkpoint, out);
      } else {
        std::ofstream f(trace_out, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(Errc::io_failure, "cannot open " + trace_out + " for writing");
        cmd_trace(c, checkpoint, f);
        f.close();
        if (!f) throw Error(Errc::io_failure, "write failed for " + trace_out);
      }
    } else if (*inspect) {
      out << cmd_inspect(inspect_path);
    }
  } catch (const Error& e) {
    err << "swarm: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "swarm: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace swarm::cli
