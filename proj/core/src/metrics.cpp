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

#include "swarm/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include "swarm/error.hpp"
#include "swarm/simulation.hpp"

namespace swarm {

double compute_ttr(const EpisodeResult& r) {
  return r.pois_completed == r.poi_count ? r.steps_used : r.time_limit;
}

double compute_gc(const EpisodeResult& r) {
  if (r.poi_count == 0) return 100.0;
  return 100.0 * r.pois_completed / r.poi_count;
}

double gc_at(const EpisodeResult& r, int steps) {
  if (r.poi_count == 0) return 100.0;
  const auto done = std::count_if(r.completion_steps.begin(), r.completion_steps.end(),
                                  [steps](int s) { return s < steps; });
  return 100.0 * static_cast<double>(done) / r.poi_count;
}

double compute_dt(const EpisodeResult& r) {
  return std::accumulate(r.agent_distance.begin(), r.agent_distance.end(), 0.0);
}

double compute_ear(std::span<const double> rewards) {
  if (rewards.empty()) throw Error(Errc::empty_input, "EAR needs at least one agent");
  return std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(rewards.size());
}

double compute_ear(const EpisodeResult& r) { return compute_ear(r.agent_rewards); }

MetricValues metrics_of(const EpisodeResult& r) {
  return {compute_ttr(r), compute_gc(r), compute_dt(r), r.agent_rewards.empty() ? 0.0 : compute_ear(r)};
}

MetricsReport report_for(const EpisodeResult& r, const GroupKey& key) {
  MetricsReport rep;
  rep.key = key;
  rep.mean = metrics_of(r);
  rep.samples = 1;
  return rep;
}

namespace {

using KeyTuple = std::tuple<int, int, long, int, std::uint64_t>;

KeyTuple masked(const GroupKey& k, unsigned fields) {
  return {fields & kByAgents ? k.agents : 0, fields & kByPois ? k.pois : 0,
          fields & kByEpisodes ? k.episodes_trained : 0L,
          fields & kByMode ? static_cast<int>(k.mode) : 0, fields & kBySeed ? k.seed : 0ULL};
}

struct Pool {
  GroupKey key;
  long n = 0;
  MetricValues sum{};
  std::vector<const MetricsReport*> members;
};

double field(const MetricValues& v, int i) {
  switch (i) {
    case 0: return v.ttr;
    case 1: return v.gc;
    case 2: return v.dt;
    default: return v.ear;
  }
}

double& field(MetricValues& v, int i) {
  switch (i) {
    case 0: return v.ttr;
    case 1: return v.gc;
    case 2: return v.dt;
    default: return v.ear;
  }
}

}  // namespace

std::vector<MetricsReport> aggregate(std::span<const MetricsReport> reports, unsigned fields) {
  if (reports.empty()) throw Error(Errc::empty_input, "aggregate needs at least one report");
  std::map<KeyTuple, Pool> groups;
  for (const auto& r : reports) {
    if (r.samples < 1) throw Error(Errc::invariant_violation, "report with no samples");
    auto [it, inserted] = groups.try_emplace(masked(r.key, fields));
    if (inserted) it->second.key = r.key;
    it->second.members.push_back(&r);
  }

  std::vector<MetricsReport> out;
  for (auto& [_, pool] : groups) {
    MetricsReport agg;
    agg.key = pool.key;
    long n = 0;
    for (const auto* m : pool.members) n += m->samples;
    agg.samples = static_cast<int>(n);
    for (int f = 0; f < 4; ++f) {
      double weighted = 0.0;
      for (const auto* m : pool.members) weighted += m->samples * field(m->mean, f);
      const double mean = weighted / static_cast<double>(n);
      double m2 = 0.0;
      for (const auto* m : pool.members) {
        const double s = field(m->std, f);
        const double d = field(m->mean, f) - mean;
        m2 += (m->samples - 1) * s * s + m->samples * d * d;
      }
      field(agg.mean, f) = mean;
      field(agg.std, f) = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
    }
    out.push_back(agg);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_episode_csv_row(std::ostream& out, const EpisodeResult& r) {
  const MetricValues m = metrics_of(r);
  out << r.episode_index << ',' << to_string(r.mode) << ',' << r.seed << ',' << format_number(m.ttr)
      << ',' << format_number(m.gc) << ',' << format_number(m.dt) << ',' << format_number(m.ear)
      << ',' << r.trades_count << '\n';
}

void write_summary_csv_row(std::ostream& out, const MetricsReport& rep) {
  out << to_string(rep.key.mode) << ',' << rep.key.agents << ',' << rep.key.pois << ','
      << rep.key.episodes_trained << ',' << rep.samples;
  for (int f = 0; f < 4; ++f) {
    out << ',' << format_number(field(rep.mean, f)) << ',' << format_number(field(rep.std, f));
  }
  out << '\n';
}

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& row : trace.rows) {
    out << row.step << ',' << row.agent << ',' << row.position.x << ',' << row.position.y << ','
        << row.action << ',' << format_number(row.reward) << '\n';
  }
}

MetricsReport window_report(std::span<const EpisodeResult> episodes, double fraction,
                            const GroupKey& key) {
  if (episodes.empty()) throw Error(Errc::empty_input, "window_report: no episodes");
  const auto n = episodes.size();
  auto w = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  w = std::clamp<std::size_t>(w, 1, n);
  std::vector<MetricsReport> reports;
  reports.reserve(w);
  for (std::size_t i = n - w; i < n; ++i) reports.push_back(report_for(episodes[i], key));
  return aggregate(reports, kByAgents | kByPois | kByEpisodes | kByMode | kBySeed).front();
}

}  // namespace swarm
