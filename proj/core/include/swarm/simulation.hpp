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
#include <functional>
#include <optional>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/economy.hpp"
#include "swarm/environment.hpp"
#include "swarm/metrics.hpp"
#include "swarm/qlearning.hpp"
#include "swarm/rng.hpp"

namespace swarm {

inline constexpr int kIdleAction = -1;

struct TraceRow {
  int step = 0;
  AgentId agent = 0;
  Cell position;  // after the move
  int action = kIdleAction;
  double reward = 0.0;
  std::vector<ContractId> owned;
};

struct EpisodeTrace {
  std::vector<Cell> nofly;
  std::vector<TraceRow> rows;
};

struct EpisodeResult {
  int episode_index = 0;
  Mode mode = Mode::economic;
  std::uint64_t seed = 0;
  int time_limit = 0;
  int steps_used = 0;
  int poi_count = 0;
  int pois_completed = 0;
  int trades_count = 0;
  std::vector<double> agent_rewards;
  std::vector<int> agent_distance;
  // Step index at which each completed POI was finished, in completion order.
  std::vector<int> completion_steps;
  std::vector<TradeRecord> trades;
  std::optional<EpisodeTrace> trace;
};

struct EpisodeOptions {
  bool learn = true;
  bool record_trace = false;
  double epsilon = 0.0;
};

// Initial world for a global episode number (iteration * episodes + episode).
World world_for_episode(const SimConfig& config, long global_episode);
// World for the k-th greedy evaluation episode.
World evaluation_world(const SimConfig& config, int k);

std::vector<QTable> make_tables(const SimConfig& config);

// Plays one episode. Each step: auction round (economic mode), then every
// agent in id order picks its target, acts, is rewarded and (if learning)
// updates its table. Stops at the time limit or when every POI is complete.
EpisodeResult run_episode(const SimConfig& config, World world, std::vector<QTable>& tables,
                          int episode_index, Rng& rng, const EpisodeOptions& options);

struct TrainingHooks {
  std::function<void(const EpisodeResult&)> on_episode;
  std::optional<std::filesystem::path> checkpoint_dir;
  bool record_traces = false;
  // Drop traces and trade lists from the returned results after on_episode.
  bool keep_details = false;
};

struct TrainingResult {
  std::vector<EpisodeResult> episodes;
  std::vector<QTable> tables;
  double final_epsilon = 0.0;
  std::vector<std::filesystem::path> checkpoints;
};

TrainingResult run_training(const SimConfig& config, const TrainingHooks& hooks = {});
// Continues from existing tables (used by iteration-aware callers and tests).
TrainingResult run_training(const SimConfig& config, std::vector<QTable> tables,
                            const TrainingHooks& hooks = {});

struct EvaluationResult {
  std::vector<EpisodeResult> episodes;
  MetricsReport report;
};

// Greedy (epsilon = 0) rollouts without table updates.
EvaluationResult run_evaluation(const SimConfig& config, const std::vector<QTable>& tables,
                                const TrainingHooks& hooks = {});

// Per-seed reports come in two flavours: the final window of training episodes
// (run.final_window) and a greedy evaluation batch on the trained tables.
struct ModeSide {
  std::vector<MetricsReport> window;  // one per seed
  std::vector<MetricsReport> greedy;
  MetricsReport window_summary;
  MetricsReport greedy_summary;
};

struct ModeComparison {
  ModeSide economic;
  ModeSide baseline;
  MetricValues ratio;         // economic / baseline, final training window
  MetricValues greedy_ratio;  // economic / baseline, greedy evaluation
};

double metric_ratio(double economic, double baseline);

// Trains and evaluates both modes on the same seeds and world sequences.
ModeComparison compare_modes(const SimConfig& config, const TrainingHooks& hooks = {});

// Writes agent_<i>.qtb files into dir; loads them back in agent order.
std::vector<std::filesystem::path> save_checkpoint(const std::vector<QTable>& tables,
                                                   const std::filesystem::path& dir);
std::vector<QTable> load_checkpoint(const std::filesystem::path& dir, int agent_count);

}  // namespace swarm
