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

#include "swarm/cli/commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "swarm/metrics.hpp"
#include "swarm/simulation.hpp"

#ifndef SWARM_VERSION
#define SWARM_VERSION "0.0.0"
#endif

namespace swarm::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_failure, "cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open " + path.string() + " for writing");
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error(Errc::io_failure, "write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  close_out(out, path);
}

RunManifest start(const char* command, const SimConfig& config, const fs::path& out_dir) {
  validate(config);
  make_dir(out_dir);
  RunManifest m;
  m.command = command;
  m.config_text = to_config_text(config);
  m.seed = config.run.seed;
  m.started_at = utc_now();
  m.version = tool_version();
  write_text(out_dir / "config.json", m.config_text);
  m.artifacts.emplace_back("config", out_dir / "config.json");
  return m;
}

void finish(RunManifest& m, const fs::path& out_dir) {
  m.finished_at = utc_now();
  m.artifacts.emplace_back("manifest", out_dir / "manifest.json");
  write_text(out_dir / "manifest.json", m.to_json());
}

void write_summary(const fs::path& path, std::span<const MetricsReport> rows) {
  auto out = open_out(path);
  out << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) write_summary_csv_row(out, r);
  close_out(out, path);
}

std::vector<QTable> load_tables(const SimConfig& config, const fs::path& checkpoint) {
  if (!fs::is_directory(checkpoint))
    throw Error(Errc::io_failure, "checkpoint directory not found: " + checkpoint.string());
  auto tables = load_checkpoint(checkpoint, config.world.agent_count);
  for (const auto& t : tables) {
    const auto& info = t.info();
    if (info.clip != config.learner.state_clip || info.width != config.world.width ||
        info.height != config.world.height) {
      throw Error(Errc::config_mismatch, "checkpoint " + checkpoint.string() +
                                             " was trained with a different grid or state clip");
    }
  }
  return tables;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_config:
    case Errc::placement_overflow:
    case Errc::exists_without_force:
    case Errc::config_mismatch:
    case Errc::empty_input:
      return kExitUsage;
    case Errc::io_failure:
    case Errc::version_mismatch:
      return kExitIo;
    default:
      return kExitInternal;
  }
}

std::string tool_version() { return SWARM_VERSION; }

std::string RunManifest::to_json() const {
  ordered_json j;
  j["tool"] = "swarm";
  j["version"] = version;
  j["command"] = command;
  j["seed"] = seed;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["config"] = ordered_json::parse(config_text);
  ordered_json a = ordered_json::object();
  for (const auto& [name, path] : artifacts) a[name] = path.generic_string();
  j["artifacts"] = std::move(a);
  return j.dump(2) + "\n";
}

void cmd_init(const fs::path& path, bool force) {
  if (fs::exists(path) && !force)
    throw Error(Errc::exists_without_force, path.string() + " already exists (use --force)");
  if (path.has_parent_path()) make_dir(path.parent_path());
  save_config(SimConfig{}, path);
  spdlog::info("wrote default config to {}", path.string());
}

RunManifest cmd_train(const SimConfig& config, const fs::path& out_dir) {
  RunManifest m = start("train", config, out_dir);
  const fs::path episodes_path = out_dir / "episodes.csv";
  const fs::path ledger_path = out_dir / "ledger.jsonl";
  auto episodes = open_out(episodes_path);
  episodes << kEpisodeCsvHeader << '\n';
  std::ofstream ledger;
  if (config.run.record_ledger) ledger = open_out(ledger_path);

  TrainingHooks hooks;
  hooks.checkpoint_dir = out_dir / "checkpoints";
  hooks.on_episode = [&](const EpisodeResult& r) {
    write_episode_csv_row(episodes, r);
    if (config.run.record_ledger) {
      for (const auto& t : r.trades) {
        ordered_json j;
        j["episode"] = r.episode_index;
        j["step"] = t.step;
        j["contract_id"] = t.contract_id;
        j["seller"] = t.seller;
        j["buyer"] = t.buyer;
        j["price"] = t.price;
        ledger << j.dump() << '\n';
      }
    }
    if ((r.episode_index + 1) % 500 == 0) {
      spdlog::debug("episode {}: ttr {} gc {} ear {}", r.episode_index + 1, compute_ttr(r),
                    compute_gc(r), compute_ear(r));
    }
  };
  spdlog::info("training {} x {} episodes ({} mode, seed {})", config.run.iterations,
               config.learner.episodes_per_iteration, to_string(config.run.mode), config.run.seed);
  const auto trained = run_training(config, hooks);
  close_out(episodes, episodes_path);
  m.artifacts.emplace_back("episodes_csv", episodes_path);
  if (config.run.record_ledger) {
    close_out(ledger, ledger_path);
    m.artifacts.emplace_back("ledger", ledger_path);
  }

  std::vector<MetricsReport> rows;
  if (!trained.episodes.empty()) {
    GroupKey key{config.world.agent_count, config.world.poi_count,
                 static_cast<long>(config.learner.episodes_per_iteration) * config.run.iterations,
                 config.run.mode, config.run.seed};
    rows.push_back(window_report(trained.episodes, 1.0, key));
  }
  write_summary(out_dir / "summary.csv", rows);
  m.artifacts.emplace_back("summary_csv", out_dir / "summary.csv");
  m.artifacts.emplace_back("checkpoints", *hooks.checkpoint_dir);
  m.artifacts.emplace_back("final_checkpoint", *hooks.checkpoint_dir / "final");
  finish(m, out_dir);
  spdlog::info("final epsilon {}, {} checkpoints", trained.final_epsilon, trained.checkpoints.size());
  return m;
}

RunManifest cmd_eval(const SimConfig& config, const fs::path& checkpoint, const fs::path& out_dir) {
  validate(config);
  const auto tables = load_tables(config, checkpoint);
  RunManifest m = start("eval", config, out_dir);
  const fs::path episodes_path = out_dir / "episodes.csv";
  auto episodes = open_out(episodes_path);
  episodes << kEpisodeCsvHeader << '\n';
  TrainingHooks hooks;
  hooks.on_episode = [&](const EpisodeResult& r) { write_episode_csv_row(episodes, r); };
  const auto eval = run_evaluation(config, tables, hooks);
  close_out(episodes, episodes_path);
  write_summary(out_dir / "summary.csv", std::span(&eval.report, 1));
  m.artifacts.emplace_back("checkpoint", checkpoint);
  m.artifacts.emplace_back("episodes_csv", episodes_path);
  m.artifacts.emplace_back("summary_csv", out_dir / "summary.csv");
  finish(m, out_dir);
  spdlog::info("evaluated {} episodes: ttr {} gc {}", eval.episodes.size(),
               format_number(eval.report.mean.ttr), format_number(eval.report.mean.gc));
  return m;
}

RunManifest cmd_compare(const SimConfig& config, const fs::path& out_dir, std::ostream& table) {
  RunManifest m = start("compare", config, out_dir);
  spdlog::info("comparing modes over {} seeds", config.run.compare_seeds);
  const auto cmp = compare_modes(config);

  const MetricsReport window[] = {cmp.economic.window_summary, cmp.baseline.window_summary};
  const MetricsReport greedy[] = {cmp.economic.greedy_summary, cmp.baseline.greedy_summary};
  write_summary(out_dir / "summary.csv", window);
  write_summary(out_dir / "summary_greedy.csv", greedy);
  m.artifacts.emplace_back("summary_csv", out_dir / "summary.csv");
  m.artifacts.emplace_back("summary_greedy_csv", out_dir / "summary_greedy.csv");

  std::ostringstream csv;
  csv << kRatioCsvHeader << '\n';
  auto rows = [&](const char* basis, const MetricValues& e, const MetricValues& b,
                  const MetricValues& r) {
    const std::pair<const char*, double MetricValues::*> metrics[] = {
        {"ttr", &MetricValues::ttr}, {"dt", &MetricValues::dt},
        {"ear", &MetricValues::ear}, {"gc", &MetricValues::gc}};
    for (const auto& [name, f] : metrics) {
      csv << basis << ',' << name << ',' << format_number(e.*f) << ',' << format_number(b.*f)
          << ',' << format_number(r.*f) << '\n';
    }
  };
  rows("window", cmp.economic.window_summary.mean, cmp.baseline.window_summary.mean, cmp.ratio);
  rows("greedy", cmp.economic.greedy_summary.mean, cmp.baseline.greedy_summary.mean,
       cmp.greedy_ratio);
  write_text(out_dir / "ratios.csv", csv.str());
  m.artifacts.emplace_back("ratios_csv", out_dir / "ratios.csv");
  table << csv.str();
  finish(m, out_dir);
  return m;
}

void cmd_trace(const SimConfig& config, const fs::path& checkpoint, std::ostream& out) {
  validate(config);
  const auto tables = load_tables(config, checkpoint);
  SimConfig cfg = config;
  cfg.run.eval_episodes = 1;
  TrainingHooks hooks;
  hooks.record_traces = true;
  hooks.keep_details = true;
  const auto eval = run_evaluation(cfg, tables, hooks);
  write_trace_csv(out, *eval.episodes.front().trace);
}

std::string cmd_inspect(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (int i = 0;; ++i) {
      auto p = path / ("agent_" + std::to_string(i) + ".qtb");
      if (!fs::exists(p)) break;
      files.push_back(std::move(p));
    }
    if (files.empty()) throw Error(Errc::io_failure, "no agent tables in " + path.string());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw Error(Errc::io_failure, "not found: " + path.string());
  }
  ordered_json j;
  j["path"] = path.generic_string();
  ordered_json tables = ordered_json::array();
  for (const auto& f : files) {
    const QTable q = QTable::load(f);
    const auto entries = q.sorted_entries();
    ordered_json t;
    t["file"] = f.filename().string();
    t["entries"] = entries.size();
    std::size_t states = 0;
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (i == 0 || entries[i].key != entries[i - 1].key) ++states;
    t["states"] = states;
    t["clip"] = q.info().clip;
    t["width"] = q.info().width;
    t["height"] = q.info().height;
    t["default_value"] = q.info().default_value;
    t["init_range"] = q.info().init_range;
    if (!entries.empty()) {
      const auto [lo, hi] = std::minmax_element(
          entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
      t["min_value"] = lo->value;
      t["max_value"] = hi->value;
    }
    tables.push_back(std::move(t));
  }
  j["tables"] = std::move(tables);
  return j.dump(2) + "\n";
}

}  // namespace swarm::cli
