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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swarm/config.hpp"

namespace swarm {

struct EpisodeResult;
struct EpisodeTrace;

struct MetricValues {
  double ttr = 0.0;
  double gc = 0.0;
  double dt = 0.0;
  double ear = 0.0;
};

struct GroupKey {
  int agents = 0;
  int pois = 0;
  long episodes_trained = 0;
  Mode mode = Mode::economic;
  std::uint64_t seed = 0;
};

struct MetricsReport {
  GroupKey key;
  MetricValues mean;
  MetricValues std;  // sample standard deviation, 0 for a single sample
  int samples = 1;
};

// Steps used when every POI was completed, otherwise the time limit.
double compute_ttr(const EpisodeResult& result);
// Percentage of POIs completed. An episode without POIs counts as 100.
double compute_gc(const EpisodeResult& result);
// Percentage completed within the first `steps` steps.
double gc_at(const EpisodeResult& result, int steps);
// Executed (unblocked) moves summed over agents.
double compute_dt(const EpisodeResult& result);
double compute_ear(std::span<const double> agent_rewards);
double compute_ear(const EpisodeResult& result);

MetricValues metrics_of(const EpisodeResult& result);
MetricsReport report_for(const EpisodeResult& result, const GroupKey& key);
// Pools the last ceil(fraction * n) episodes (at least one) into a single report.
MetricsReport window_report(std::span<const EpisodeResult> episodes, double fraction,
                            const GroupKey& key);

enum GroupField : unsigned {
  kByAgents = 1u << 0,
  kByPois = 1u << 1,
  kByEpisodes = 1u << 2,
  kByMode = 1u << 3,
  kBySeed = 1u << 4,
};

// Pools reports sharing the selected key fields (sample-weighted mean, pooled
// sample std). Output is ordered by group key. Throws empty_input.
std::vector<MetricsReport> aggregate(std::span<const MetricsReport> reports, unsigned fields);

// Shortest round-trip decimal form; used for every number written to CSV.
std::string format_number(double v);

inline constexpr const char* kEpisodeCsvHeader = "episode,mode,seed,ttr,gc,dt,ear,trades";
inline constexpr const char* kSummaryCsvHeader =
    "mode,agents,pois,episodes_trained,samples,ttr_mean,ttr_std,gc_mean,gc_std,dt_mean,dt_std,"
    "ear_mean,ear_std";
inline constexpr const char* kTraceCsvHeader = "step,agent,x,y,action,reward";

void write_episode_csv_row(std::ostream& out, const EpisodeResult& result);
void write_summary_csv_row(std::ostream& out, const MetricsReport& report);
void write_trace_csv(std::ostream& out, const EpisodeTrace& trace);

}  // namespace swarm
