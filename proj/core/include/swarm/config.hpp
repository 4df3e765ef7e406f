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
#include <string>
#include <string_view>
#include <vector>

namespace swarm {

enum class Mode { economic, baseline };
enum class AuctionMode { price, distance };

std::string_view to_string(Mode mode);
std::string_view to_string(AuctionMode mode);
Mode parse_mode(std::string_view text);
AuctionMode parse_auction_mode(std::string_view text);

struct WorldParams {
  int width = 40;
  int height = 40;
  int poi_count = 20;
  int nfz_count = 30;
  int agent_count = 3;
  int redundancy = 1;
  // Redraw placement every episode unless set.
  bool fixed_world = false;
};

// Tabular learner hyperparameters. Defaults are the published Table II values.
struct LearnerParams {
  double epsilon = 0.5;
  double epsilon_decay = 0.9999;
  double gamma = 0.95;
  double learning_rate = 0.1;
  int episodes_per_iteration = 25000;
  int steps_per_episode = 200;
  int state_clip = 20;
  double default_value = 0.0;
  double random_init_range = 0.0;
};

struct EconomyParams {
  double cost_per_step = 2.0;
  double bid_fraction = 0.5;
  double trade_reward = 10.0;
  double initial_capital = 100.0;
  AuctionMode auction_mode = AuctionMode::price;
  // Price travel with obstacle-aware BFS instead of Chebyshev distance.
  bool use_path_distance = false;
  // Charge travel along the agent's nearest-first tour through its live
  // contracts instead of the direct distance from its position.
  bool route_aware = true;
};

struct RewardParams {
  double poi_reward_max = 100.0;
  double alpha = 1.0;
  double beta = 0.0;
  double collision_penalty = 25.0;
  double block_penalty = 10.0;
  double step_penalty = 1.0;
};

struct RunParams {
  Mode mode = Mode::economic;
  std::uint64_t seed = 1;
  int iterations = 1;
  int checkpoint_every = 1000;
  int eval_episodes = 10;
  int compare_seeds = 1;
  // Fraction of training episodes, counted from the end, that compare_modes averages.
  double final_window = 0.05;
  bool record_ledger = true;
};

struct SimConfig {
  WorldParams world;
  LearnerParams learner;
  EconomyParams economy;
  RewardParams reward;
  RunParams run;

  int time_limit() const { return learner.steps_per_episode; }
};

// Throws Error(invalid_config) describing the first violated constraint.
void validate(const SimConfig& config);

// Serialized form is a JSON document with one section per parameter group.
std::string to_config_text(const SimConfig& config);
SimConfig from_config_text(std::string_view text);

SimConfig load_config(const std::filesystem::path& path);
void save_config(const SimConfig& config, const std::filesystem::path& path);

// Applies a single "section.key=value" override; value is parsed according to
// the key's type. Throws Error(invalid_config) for unknown keys or bad values.
void apply_override(SimConfig& config, std::string_view key, std::string_view value);

// All "section.key" names accepted by apply_override, in file order.
std::vector<std::string> config_keys();

}  // namespace swarm
