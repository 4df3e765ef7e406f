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

#include <benchmark/benchmark.h>

#include "swarm/economy.hpp"
#include "swarm/environment.hpp"
#include "swarm/qlearning.hpp"
#include "swarm/simulation.hpp"

namespace {

using namespace swarm;

void BM_ApplyMove(benchmark::State& state) {
  SimConfig c;
  const World w = init_world(c, 1);
  int a = 0;
  for (auto _ : state) {
    auto out = apply_move(w.grid, w.poses[0], direction(a), w.poses);
    benchmark::DoNotOptimize(out);
    a = (a + 1) % kActionCount;
  }
}
BENCHMARK(BM_ApplyMove);

void BM_QUpdate(benchmark::State& state) {
  QTableInfo info;
  info.clip = 20;
  QTable q(info);
  LearnerParams p;
  Rng rng(3);
  int i = 0;
  for (auto _ : state) {
    const StateKey s{{i % 40, (i / 40) % 40}, {i % 7, i % 5}, true};
    const StateKey next{{(i + 1) % 40, (i / 40) % 40}, {i % 7, i % 5}, true};
    benchmark::DoNotOptimize(update(q, s, i % kActionCount, -1.0, next, p));
    ++i;
  }
}
BENCHMARK(BM_QUpdate);

void BM_AuctionRound(benchmark::State& state) {
  SimConfig c;
  c.world.agent_count = static_cast<int>(state.range(0));
  const World w = init_world(c, 5);
  const Market start = issue_contracts(w.grid, c.world.agent_count, c.world.redundancy, 100);
  for (auto _ : state) {
    state.PauseTiming();
    Market m = start;
    refresh_contracts(m, c.reward, 10, c.time_limit());
    state.ResumeTiming();
    benchmark::DoNotOptimize(run_auction_round(m, w.poses, w.grid, c.economy, 10));
  }
}
BENCHMARK(BM_AuctionRound)->Arg(3)->Arg(9);

void BM_Episode(benchmark::State& state) {
  SimConfig c;
  c.run.mode = state.range(0) ? Mode::economic : Mode::baseline;
  auto tables = make_tables(c);
  Rng rng(7);
  int e = 0;
  for (auto _ : state) {
    auto r = run_episode(c, world_for_episode(c, e), tables, e, rng, {true, false, c.learner.epsilon});
    benchmark::DoNotOptimize(r);
    ++e;
  }
}
BENCHMARK(BM_Episode)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
