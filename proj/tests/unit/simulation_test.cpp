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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "swarm/error.hpp"
#include "swarm/metrics.hpp"
#include "swarm/simulation.hpp"
#include "test_support.hpp"

namespace swarm {
namespace {

using testing_support::error_code;
using testing_support::ScratchDir;

SimConfig small_config(int agents = 3, int pois = 6) {
  SimConfig c;
  c.world.width = 15;
  c.world.height = 15;
  c.world.poi_count = pois;
  c.world.nfz_count = 10;
  c.world.agent_count = agents;
  c.learner.steps_per_episode = 80;
  c.learner.episodes_per_iteration = 20;
  c.run.eval_episodes = 3;
  return c;
}

std::string serialize(const EpisodeResult& r) {
  std::ostringstream out;
  write_episode_csv_row(out, r);
  for (double x : r.agent_rewards) out << format_number(x) << ';';
  for (int d : r.agent_distance) out << d << ';';
  for (int s : r.completion_steps) out << s << ';';
  for (const auto& t : r.trades) out << t.step << ':' << t.contract_id << ':' << t.buyer << ':' << format_number(t.price) << ';';
  if (r.trace) write_trace_csv(out, *r.trace);
  return out.str();
}

World adjacent_world() {
  Poi p;
  p.id = 0;
  p.position = {2, 2};
  return World{GridWorld(5, 5, 10, {}, {p}), {{0, {1, 2}}}};
}

TEST(RunEpisode, GreedyAgentNextToPoiFinishesInOneStep) {
  SimConfig c;
  c.world.width = 5;
  c.world.height = 5;
  c.world.agent_count = 1;
  c.learner.steps_per_episode = 10;
  auto tables = make_tables(c);
  tables[0].set(encode_state({1, 2}, Cell{2, 2}, c.learner.state_clip), 0, 5.0);
  Rng rng(1);
  const auto r = run_episode(c, adjacent_world(), tables, 0, rng, {false, true, 0.0});
  EXPECT_EQ(r.steps_used, 1);
  EXPECT_EQ(r.pois_completed, 1);
  EXPECT_DOUBLE_EQ(compute_gc(r), 100.0);
  EXPECT_EQ(compute_ttr(r), 1.0);
  EXPECT_EQ(r.completion_steps, std::vector<int>{0});
  ASSERT_EQ(r.trace->rows.size(), 1u);
  EXPECT_EQ(r.trace->rows[0].position, (Cell{2, 2}));
}

TEST(RunEpisode, MismatchedTablesAreRejected) {
  SimConfig c = small_config();
  auto tables = make_tables(c);
  tables.pop_back();
  Rng rng(1);
  EXPECT_EQ(error_code([&] { run_episode(c, world_for_episode(c, 0), tables, 0, rng, {}); }),
            Errc::config_mismatch);
}

TEST(RunEpisode, BaselineNeverTrades) {
  SimConfig c = small_config(4, 10);
  c.run.mode = Mode::baseline;
  c.economy.cost_per_step = 50;  // would force sales in economic mode
  const auto out = run_training(c);
  for (const auto& r : out.episodes) EXPECT_EQ(r.trades_count, 0);
  c.run.mode = Mode::economic;
  int trades = 0;
  for (const auto& r : run_training(c).episodes) trades += r.trades_count;
  EXPECT_GT(trades, 0);
}

TEST(RunEpisode, SameSeedSameResult) {
  for (Mode mode : {Mode::economic, Mode::baseline}) {
    SimConfig c = small_config();
    c.run.mode = mode;
    TrainingHooks hooks;
    hooks.record_traces = true;
    hooks.keep_details = true;
    const auto a = run_training(c, hooks);
    const auto b = run_training(c, hooks);
    ASSERT_EQ(a.episodes.size(), b.episodes.size());
    for (std::size_t i = 0; i < a.episodes.size(); ++i)
      EXPECT_EQ(serialize(a.episodes[i]), serialize(b.episodes[i]));
    for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_TRUE(a.tables[i] == b.tables[i]);
  }
}

TEST(RunEpisode, TraceAndStepInvariants) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig c = small_config(3, 5);
    c.run.seed = seed;
    c.world.nfz_count = 40;
    c.world.redundancy = 1 + static_cast<int>(seed % 2);
    TrainingHooks hooks;
    hooks.record_traces = true;
    hooks.on_episode = [&](const EpisodeResult& r) {
      const World w = world_for_episode(c, r.episode_index);
      ASSERT_LE(r.steps_used, c.time_limit());
      ASSERT_LE(r.pois_completed, r.poi_count);
      // Stopping early means everything got done; unfinished means the full T ran.
      if (r.steps_used < c.time_limit()) EXPECT_EQ(r.pois_completed, r.poi_count);
      if (r.pois_completed < r.poi_count) EXPECT_EQ(r.steps_used, c.time_limit());
      ASSERT_EQ(r.trace->rows.size(), static_cast<std::size_t>(c.world.agent_count * r.steps_used));
      for (const auto& row : r.trace->rows) ASSERT_FALSE(w.grid.is_nofly(row.position));
      int moves = 0;
      for (int d : r.agent_distance) moves += d;
      EXPECT_LE(moves, c.world.agent_count * r.steps_used);
      for (std::size_t i = 1; i < r.completion_steps.size(); ++i)
        EXPECT_LE(r.completion_steps[i - 1], r.completion_steps[i]);
    };
    run_training(c, hooks);
  }
}

TEST(RunEpisode, BaselineOwnershipStaysRoundRobin) {
  SimConfig c = small_config(3, 7);
  c.run.mode = Mode::baseline;
  TrainingHooks hooks;
  hooks.record_traces = true;
  hooks.on_episode = [&](const EpisodeResult& r) {
    for (const auto& row : r.trace->rows) {
      for (ContractId id : row.owned) ASSERT_EQ(id % c.world.agent_count, row.agent);
      ASSERT_EQ(row.owned.size(), static_cast<std::size_t>((7 - row.agent + 2) / 3));
    }
  };
  run_training(c, hooks);
}

TEST(RunEpisode, CompletionRewardsAreBounded) {
  SimConfig c = small_config(4, 6);
  c.world.redundancy = 2;
  c.reward.alpha = 0;
  c.reward.step_penalty = 0;
  c.reward.block_penalty = 0;
  c.reward.collision_penalty = 0;
  c.economy.trade_reward = 0;
  c.learner.episodes_per_iteration = 40;
  const double cap = 6 * 2 * c.reward.poi_reward_max;
  for (const auto& r : run_training(c).episodes) {
    double sum = 0;
    for (double x : r.agent_rewards) {
      EXPECT_GE(x, 0.0);
      sum += x;
    }
    EXPECT_LE(sum, cap + 1e-9);
  }
}

TEST(RunEpisode, IdleAgentsStayPut) {
  // Agent 1 owns nothing (one POI, two agents), so it must never move.
  SimConfig c = small_config(2, 1);
  c.run.mode = Mode::baseline;
  TrainingHooks hooks;
  hooks.record_traces = true;
  hooks.on_episode = [&](const EpisodeResult& r) {
    EXPECT_EQ(r.agent_distance[1], 0);
    EXPECT_DOUBLE_EQ(r.agent_rewards[1], 0.0);
    for (const auto& row : r.trace->rows)
      if (row.agent == 1) EXPECT_EQ(row.action, kIdleAction);
  };
  run_training(c, hooks);
}

TEST(RunTraining, ZeroEpisodesLeavesTablesUntouched) {
  SimConfig c = small_config();
  c.learner.episodes_per_iteration = 0;
  const auto out = run_training(c);
  EXPECT_TRUE(out.episodes.empty());
  for (const auto& t : out.tables) EXPECT_EQ(t.entry_count(), 0u);
  EXPECT_EQ(out.final_epsilon, c.learner.epsilon);
}

TEST(RunTraining, EpsilonDecaysOncePerEpisode) {
  SimConfig c = small_config(1, 2);
  c.learner.episodes_per_iteration = 7;
  c.run.iterations = 3;
  c.learner.epsilon_decay = 0.97;
  const auto out = run_training(c);
  EXPECT_EQ(out.episodes.size(), 21u);
  EXPECT_NEAR(out.final_epsilon, 0.5 * std::pow(0.97, 21), 1e-15);
  EXPECT_EQ(out.episodes.back().episode_index, 20);
}

TEST(RunTraining, TablesOnlyGrow) {
  SimConfig c = small_config();
  c.learner.episodes_per_iteration = 1;
  auto tables = make_tables(c);
  std::vector<std::size_t> last(tables.size(), 0);
  for (int e = 0; e < 15; ++e) {
    c.run.seed = 100 + static_cast<std::uint64_t>(e);
    tables = run_training(c, std::move(tables)).tables;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      EXPECT_GE(tables[i].entry_count(), last[i]);
      last[i] = tables[i].entry_count();
    }
  }
}

TEST(RunTraining, EarlyAndLateRewardsImprove) {
  // 100 episodes on one fixed case-study sized world; one-sided sign test over 10 seeds.
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig c;
    c.world.fixed_world = true;
    c.learner.episodes_per_iteration = 100;
    c.run.seed = seed;
    const auto out = run_training(c);
    double first = 0, last = 0;
    for (int i = 0; i < 10; ++i) {
      first += compute_ear(out.episodes[static_cast<std::size_t>(i)]);
      last += compute_ear(out.episodes[out.episodes.size() - 1 - static_cast<std::size_t>(i)]);
    }
    improved += last > first;
  }
  EXPECT_GE(improved, 9);  // P(>=9 of 10 | no effect) ~ 0.011
}

TEST(RunTraining, WritesCheckpointsOnCadence) {
  ScratchDir dir;
  SimConfig c = small_config();
  c.learner.episodes_per_iteration = 10;
  c.run.iterations = 2;
  c.run.checkpoint_every = 4;
  TrainingHooks hooks;
  hooks.checkpoint_dir = dir.path();
  const auto out = run_training(c, hooks);
  for (const char* name : {"episode_000004", "episode_000008", "iteration_000001", "episode_000012",
                           "episode_000016", "episode_000020", "iteration_000002", "final"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name / "agent_0.qtb")) << name;
  }
  const auto back = load_checkpoint(dir / "final", c.world.agent_count);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_TRUE(back[i] == out.tables[i]);
}

TEST(RunEvaluation, RepeatableAndLearningFree) {
  SimConfig c = small_config();
  const auto trained = run_training(c);
  const auto a = run_evaluation(c, trained.tables);
  const auto b = run_evaluation(c, trained.tables);
  EXPECT_EQ(a.report.mean.ttr, b.report.mean.ttr);
  EXPECT_EQ(a.report.mean.ear, b.report.mean.ear);
  EXPECT_EQ(a.report.samples, c.run.eval_episodes);
  for (std::size_t i = 0; i < a.episodes.size(); ++i) EXPECT_EQ(serialize(a.episodes[i]), serialize(b.episodes[i]));
}

TEST(RunEvaluation, TrainingBeatsUntrainedOnFixedWorlds) {
  int better_or_equal = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SimConfig c;
    c.world.width = 10;
    c.world.height = 10;
    c.world.poi_count = 3;
    c.world.nfz_count = 6;
    c.world.agent_count = 1;
    c.world.fixed_world = true;
    c.learner.steps_per_episode = 60;
    c.learner.episodes_per_iteration = 300;
    c.run.eval_episodes = 1;
    c.run.seed = seed;
    const auto untrained = run_evaluation(c, make_tables(c)).report.mean.ttr;
    const auto trained = run_evaluation(c, run_training(c).tables).report.mean.ttr;
    better_or_equal += trained <= untrained;
  }
  EXPECT_GE(better_or_equal, 40);
}

TEST(RunEvaluation, SolvableSingleAgentReachesEverything) {
  SimConfig c;
  c.world.width = 6;
  c.world.height = 6;
  c.world.poi_count = 1;
  c.world.nfz_count = 0;
  c.world.agent_count = 1;
  c.world.fixed_world = true;
  c.learner.steps_per_episode = 40;
  c.learner.episodes_per_iteration = 500;
  c.run.eval_episodes = 1;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    c.run.seed = seed;
    EXPECT_DOUBLE_EQ(run_evaluation(c, run_training(c).tables).report.mean.gc, 100.0) << seed;
  }
}

TEST(CompareModes, InertMarketGivesUnitRatios) {
  SimConfig c = small_config();
  c.economy.cost_per_step = 0;  // every contract is worth keeping: nothing is sold
  c.run.compare_seeds = 2;
  const auto cmp = compare_modes(c);
  for (const MetricValues& r : {cmp.ratio, cmp.greedy_ratio}) {
    EXPECT_DOUBLE_EQ(r.ttr, 1.0);
    EXPECT_DOUBLE_EQ(r.gc, 1.0);
    EXPECT_DOUBLE_EQ(r.dt, 1.0);
    EXPECT_DOUBLE_EQ(r.ear, 1.0);
  }
  EXPECT_EQ(cmp.economic.window.size(), 2u);
  EXPECT_EQ(cmp.baseline.greedy.size(), 2u);
}

TEST(CompareModes, ReportsBothModes) {
  SimConfig c = small_config(3, 8);
  c.learner.episodes_per_iteration = 40;
  const auto cmp = compare_modes(c);
  EXPECT_EQ(cmp.economic.window_summary.key.mode, Mode::economic);
  EXPECT_EQ(cmp.baseline.window_summary.key.mode, Mode::baseline);
  EXPECT_DOUBLE_EQ(cmp.ratio.dt, cmp.economic.window_summary.mean.dt / cmp.baseline.window_summary.mean.dt);
  EXPECT_EQ(cmp.economic.window_summary.samples, 2);  // ceil(5% of 40)
}

TEST(MetricRatio, HandlesZeroBaseline) {
  EXPECT_EQ(metric_ratio(0, 0), 1.0);
  EXPECT_TRUE(std::isinf(metric_ratio(1, 0)));
  EXPECT_EQ(metric_ratio(3, 4), 0.75);
}

}  // namespace
}  // namespace swarm
