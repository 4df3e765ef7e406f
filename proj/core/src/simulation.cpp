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

#include "swarm/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "swarm/error.hpp"

namespace swarm {

namespace {

// Stream labels for derive_seed.
constexpr std::uint64_t kFixedWorldStream = 1;
constexpr std::uint64_t kEpisodeWorldStream = 2;
constexpr std::uint64_t kEvalWorldStream = 3;
constexpr std::uint64_t kTableInitStream = 4;
constexpr std::uint64_t kExplorationStream = 5;
constexpr std::uint64_t kEvalPolicyStream = 6;

std::string numbered(const char* prefix, long n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%06ld", prefix, n);
  return buf;
}

}  // namespace

World world_for_episode(const SimConfig& config, long global_episode) {
  const std::uint64_t seed = config.run.seed;
  if (config.world.fixed_world) return init_world(config, derive_seed(seed, kFixedWorldStream));
  return init_world(config, derive_seed(derive_seed(seed, kEpisodeWorldStream),
                                        static_cast<std::uint64_t>(global_episode)));
}

World evaluation_world(const SimConfig& config, int k) {
  const std::uint64_t seed = config.run.seed;
  if (config.world.fixed_world) return init_world(config, derive_seed(seed, kFixedWorldStream));
  return init_world(config, derive_seed(derive_seed(seed, kEvalWorldStream), static_cast<std::uint64_t>(k)));
}

std::vector<QTable> make_tables(const SimConfig& config) {
  std::vector<QTable> tables;
  const auto seed = derive_seed(config.run.seed, kTableInitStream);
  for (int i = 0; i < config.world.agent_count; ++i) {
    QTableInfo info;
    info.clip = config.learner.state_clip;
    info.width = config.world.width;
    info.height = config.world.height;
    info.default_value = config.learner.default_value;
    info.init_range = config.learner.random_init_range;
    info.init_seed = info.init_range == 0.0 ? 0 : derive_seed(seed, static_cast<std::uint64_t>(i));
    tables.emplace_back(info);
  }
  return tables;
}

EpisodeResult run_episode(const SimConfig& config, World world, std::vector<QTable>& tables,
                          int episode_index, Rng& rng, const EpisodeOptions& options) {
  const int n = config.world.agent_count;
  const int T = config.time_limit();
  if (static_cast<int>(tables.size()) != n || static_cast<int>(world.poses.size()) != n) {
    throw Error(Errc::config_mismatch, "expected " + std::to_string(n) + " agents, got " +
                                           std::to_string(tables.size()) + " tables and " +
                                           std::to_string(world.poses.size()) + " poses");
  }
  if (world.grid.time_limit() != T) throw Error(Errc::config_mismatch, "world time limit differs from config");

  GridWorld& grid = world.grid;
  auto& poses = world.poses;
  Market market = issue_contracts(grid, n, config.world.redundancy, config.economy.initial_capital);
  const bool economic = config.run.mode == Mode::economic;
  const int clip = config.learner.state_clip;

  EpisodeResult result;
  result.episode_index = episode_index;
  result.mode = config.run.mode;
  result.seed = config.run.seed;
  result.time_limit = T;
  result.poi_count = static_cast<int>(grid.pois().size());
  result.agent_rewards.assign(static_cast<std::size_t>(n), 0.0);
  result.agent_distance.assign(static_cast<std::size_t>(n), 0);
  if (options.record_trace) {
    result.trace.emplace();
    result.trace->nofly = grid.nofly();
    result.trace->rows.reserve(static_cast<std::size_t>(n * T));
  }

  std::vector<double> pending(static_cast<std::size_t>(n), 0.0);
  std::vector<AgentPose> others;

  int t = 0;
  while (!grid.all_done() && t < T) {
    grid.set_step(t);
    refresh_contracts(market, config.reward, t, T);

    if (economic) {
      auto round = run_auction_round(market, poses, grid, config.economy, t);
      for (const auto& trade : round.trades) {
        const auto deltas = trade_rewards(trade, config.economy);
        pending[static_cast<std::size_t>(trade.seller)] += deltas.seller;
        pending[static_cast<std::size_t>(trade.buyer)] += deltas.buyer;
        ++result.trades_count;
        result.trades.push_back(trade);
      }
    }

    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      AgentPose& pose = poses[ui];
      auto& total = result.agent_rewards[ui];
      const auto owned = market.owned_contracts(i);
      const auto target = grid.all_done() ? std::nullopt : nearest_owned_target(grid, pose.position, owned);

      if (!target) {
        total += pending[ui];
        if (result.trace) {
          result.trace->rows.push_back({t, i, pose.position, kIdleAction, pending[ui],
                                        market.wallets[ui].owned});
        }
        pending[ui] = 0.0;
        continue;
      }

      const StateKey s = encode_state(pose.position, grid.poi(*target).position, clip);
      const int action = select_action(tables[ui], s, options.epsilon, rng);
      const MoveOutcome outcome = apply_move(grid, pose, direction(action), poses);

      std::span<const AgentPose> crowd;
      if (config.reward.beta != 0.0) {
        others.clear();
        for (const auto& p : poses) {
          if (p.agent_id != i) others.push_back(p);
        }
        crowd = others;
      }
      const double reward = step_reward(grid, outcome, owned, config.reward, crowd).total() + pending[ui];
      pending[ui] = 0.0;

      pose.position = outcome.new_position;
      if (!outcome.blocked) ++result.agent_distance[ui];

      for (PoiId pid : outcome.pois_reached) {
        for (ContractId cid : market.wallets[ui].owned) {
          Contract& c = market.contract(cid);
          if (c.poi_id == pid) c.completed = true;
        }
        if (grid.record_visit(pid, i, t)) {
          for (auto& c : market.contracts) {
            if (c.poi_id == pid) c.completed = true;
          }
          result.completion_steps.push_back(t);
        }
      }
      total += reward;

      if (options.learn) {
        std::optional<StateKey> next;
        if (!grid.all_done()) {
          const auto owned_after = market.owned_contracts(i);
          if (auto nt = nearest_owned_target(grid, pose.position, owned_after)) {
            next = encode_state(pose.position, grid.poi(*nt).position, clip);
          }
        }
        update(tables[ui], s, action, reward, next, config.learner);
      }

      if (result.trace) {
        result.trace->rows.push_back({t, i, pose.position, action, reward, market.wallets[ui].owned});
      }
    }
    ++t;
  }

  for (int i = 0; i < n; ++i) result.agent_rewards[static_cast<std::size_t>(i)] += pending[static_cast<std::size_t>(i)];
  result.steps_used = t;
  result.pois_completed = grid.completed_count();
  return result;
}

std::vector<std::filesystem::path> save_checkpoint(const std::vector<QTable>& tables,
                                                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_failure, "cannot create checkpoint directory " + dir.string());
  std::vector<std::filesystem::path> paths;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    auto p = dir / ("agent_" + std::to_string(i) + ".qtb");
    tables[i].save(p);
    paths.push_back(std::move(p));
  }
  return paths;
}

std::vector<QTable> load_checkpoint(const std::filesystem::path& dir, int agent_count) {
  std::vector<QTable> tables;
  for (int i = 0; i < agent_count; ++i) {
    tables.push_back(QTable::load(dir / ("agent_" + std::to_string(i) + ".qtb")));
  }
  return tables;
}

TrainingResult run_training(const SimConfig& config, const TrainingHooks& hooks) {
  return run_training(config, make_tables(config), hooks);
}

TrainingResult run_training(const SimConfig& config, std::vector<QTable> tables,
                            const TrainingHooks& hooks) {
  validate(config);
  if (static_cast<int>(tables.size()) != config.world.agent_count)
    throw Error(Errc::config_mismatch, "table count differs from agent count");

  TrainingResult out;
  LearnerParams learner = config.learner;
  Rng rng(derive_seed(config.run.seed, kExplorationStream));
  const int per_iteration = config.learner.episodes_per_iteration;

  auto checkpoint = [&](const std::string& name) {
    if (!hooks.checkpoint_dir) return;
    save_checkpoint(tables, *hooks.checkpoint_dir / name);
    out.checkpoints.push_back(*hooks.checkpoint_dir / name);
  };

  for (int it = 0; it < config.run.iterations; ++it) {
    for (int e = 0; e < per_iteration; ++e) {
      const long global = static_cast<long>(it) * per_iteration + e;
      EpisodeOptions options{true, hooks.record_traces, learner.epsilon};
      EpisodeResult r = run_episode(config, world_for_episode(config, global), tables,
                                    static_cast<int>(global), rng, options);
      learner = decay_epsilon(learner);
      if (hooks.on_episode) hooks.on_episode(r);
      if (!hooks.keep_details) {
        r.trace.reset();
        r.trades.clear();
        r.trades.shrink_to_fit();
      }
      out.episodes.push_back(std::move(r));
      if (config.run.checkpoint_every > 0 && (global + 1) % config.run.checkpoint_every == 0) {
        checkpoint(numbered("episode_", global + 1));
      }
    }
    if (per_iteration > 0) checkpoint(numbered("iteration_", it + 1));
  }
  if (hooks.checkpoint_dir) {
    save_checkpoint(tables, *hooks.checkpoint_dir / "final");
    out.checkpoints.push_back(*hooks.checkpoint_dir / "final");
  }
  out.final_epsilon = learner.epsilon;
  out.tables = std::move(tables);
  return out;
}

namespace {

GroupKey key_for(const SimConfig& config) {
  return GroupKey{config.world.agent_count, config.world.poi_count,
                  static_cast<long>(config.learner.episodes_per_iteration) * config.run.iterations,
                  config.run.mode, config.run.seed};
}

}  // namespace

EvaluationResult run_evaluation(const SimConfig& config, const std::vector<QTable>& tables,
                                const TrainingHooks& hooks) {
  validate(config);
  std::vector<QTable> frozen = tables;
  Rng rng(derive_seed(config.run.seed, kEvalPolicyStream));
  EvaluationResult out;
  std::vector<MetricsReport> reports;
  const GroupKey key = key_for(config);
  for (int k = 0; k < config.run.eval_episodes; ++k) {
    EpisodeOptions options{false, hooks.record_traces, 0.0};
    EpisodeResult r = run_episode(config, evaluation_world(config, k), frozen, k, rng, options);
    if (hooks.on_episode) hooks.on_episode(r);
    reports.push_back(report_for(r, key));
    if (!hooks.keep_details) {
      r.trace.reset();
      r.trades.clear();
    }
    out.episodes.push_back(std::move(r));
  }
  out.report = aggregate(reports, kByAgents | kByPois | kByEpisodes | kByMode | kBySeed).front();
  return out;
}

double metric_ratio(double economic, double baseline) {
  if (baseline == 0.0) return economic == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return economic / baseline;
}

ModeComparison compare_modes(const SimConfig& config, const TrainingHooks& hooks) {
  validate(config);
  ModeComparison out;
  for (int s = 0; s < config.run.compare_seeds; ++s) {
    for (Mode mode : {Mode::economic, Mode::baseline}) {
      SimConfig cfg = config;
      cfg.run.mode = mode;
      cfg.run.seed = config.run.seed + static_cast<std::uint64_t>(s);
      TrainingHooks train_hooks = hooks;
      train_hooks.checkpoint_dir.reset();
      const auto trained = run_training(cfg, train_hooks);
      auto& side = mode == Mode::economic ? out.economic : out.baseline;
      if (!trained.episodes.empty())
        side.window.push_back(window_report(trained.episodes, cfg.run.final_window, key_for(cfg)));
      side.greedy.push_back(run_evaluation(cfg, trained.tables, hooks).report);
    }
  }
  const unsigned fields = kByAgents | kByPois | kByEpisodes | kByMode;
  auto ratios = [](const MetricValues& e, const MetricValues& b) {
    return MetricValues{metric_ratio(e.ttr, b.ttr), metric_ratio(e.gc, b.gc),
                        metric_ratio(e.dt, b.dt), metric_ratio(e.ear, b.ear)};
  };
  for (ModeSide* side : {&out.economic, &out.baseline}) {
    side->greedy_summary = aggregate(side->greedy, fields).front();
    // With zero training episodes there is no window; fall back to the greedy batch.
    side->window_summary =
        side->window.empty() ? side->greedy_summary : aggregate(side->window, fields).front();
  }
  out.ratio = ratios(out.economic.window_summary.mean, out.baseline.window_summary.mean);
  out.greedy_ratio = ratios(out.economic.greedy_summary.mean, out.baseline.greedy_summary.mean);
  return out;
}

}  // namespace swarm
