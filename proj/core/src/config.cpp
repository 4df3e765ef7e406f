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

#include "swarm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "json.hpp"
#include "swarm/error.hpp"
#include "swarm/qlearning.hpp"

namespace swarm {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_config: return "invalid-config";
    case Errc::placement_overflow: return "placement-overflow";
    case Errc::already_completed: return "already-completed";
    case Errc::unknown_poi: return "unknown-poi";
    case Errc::stale_broadcast: return "stale-broadcast";
    case Errc::config_mismatch: return "config-mismatch";
    case Errc::io_failure: return "io-failure";
    case Errc::version_mismatch: return "checkpoint-version-mismatch";
    case Errc::exists_without_force: return "exists-without-force";
    case Errc::empty_input: return "empty-input";
    case Errc::invariant_violation: return "invariant-violation";
  }
  return "unknown";
}

std::string_view to_string(Mode mode) {
  return mode == Mode::economic ? "economic" : "baseline";
}

std::string_view to_string(AuctionMode mode) {
  return mode == AuctionMode::price ? "price" : "distance";
}

Mode parse_mode(std::string_view text) {
  if (text == "economic") return Mode::economic;
  if (text == "baseline") return Mode::baseline;
  throw Error(Errc::invalid_config, "unknown mode '" + std::string(text) + "'");
}

AuctionMode parse_auction_mode(std::string_view text) {
  if (text == "price") return AuctionMode::price;
  if (text == "distance") return AuctionMode::distance;
  throw Error(Errc::invalid_config, "unknown auction mode '" + std::string(text) + "'");
}

namespace {

using nlohmann::ordered_json;

// Every serialized field, in file order. Works for const and mutable configs.
template <class Config, class Fn>
void visit_fields(Config& c, Fn&& fn) {
  fn("world", "width", c.world.width);
  fn("world", "height", c.world.height);
  fn("world", "poi_count", c.world.poi_count);
  fn("world", "nfz_count", c.world.nfz_count);
  fn("world", "agent_count", c.world.agent_count);
  fn("world", "redundancy", c.world.redundancy);
  fn("world", "fixed_world", c.world.fixed_world);

  fn("learner", "epsilon", c.learner.epsilon);
  fn("learner", "epsilon_decay", c.learner.epsilon_decay);
  fn("learner", "gamma", c.learner.gamma);
  fn("learner", "learning_rate", c.learner.learning_rate);
  fn("learner", "episodes_per_iteration", c.learner.episodes_per_iteration);
  fn("learner", "steps_per_episode", c.learner.steps_per_episode);
  fn("learner", "state_clip", c.learner.state_clip);
  fn("learner", "default_value", c.learner.default_value);
  fn("learner", "random_init_range", c.learner.random_init_range);

  fn("economy", "cost_per_step", c.economy.cost_per_step);
  fn("economy", "bid_fraction", c.economy.bid_fraction);
  fn("economy", "trade_reward", c.economy.trade_reward);
  fn("economy", "initial_capital", c.economy.initial_capital);
  fn("economy", "auction_mode", c.economy.auction_mode);
  fn("economy", "use_path_distance", c.economy.use_path_distance);
  fn("economy", "route_aware", c.economy.route_aware);

  fn("reward", "poi_reward_max", c.reward.poi_reward_max);
  fn("reward", "alpha", c.reward.alpha);
  fn("reward", "beta", c.reward.beta);
  fn("reward", "collision_penalty", c.reward.collision_penalty);
  fn("reward", "block_penalty", c.reward.block_penalty);
  fn("reward", "step_penalty", c.reward.step_penalty);

  fn("run", "mode", c.run.mode);
  fn("run", "seed", c.run.seed);
  fn("run", "iterations", c.run.iterations);
  fn("run", "checkpoint_every", c.run.checkpoint_every);
  fn("run", "eval_episodes", c.run.eval_episodes);
  fn("run", "compare_seeds", c.run.compare_seeds);
  fn("run", "final_window", c.run.final_window);
  fn("run", "record_ledger", c.run.record_ledger);
}

template <class T>
ordered_json field_to_json(const T& v) {
  if constexpr (std::is_same_v<T, Mode> || std::is_same_v<T, AuctionMode>) {
    return std::string(to_string(v));
  } else {
    return v;
  }
}

std::string qualified(const char* section, const char* key) {
  return std::string(section) + "." + key;
}

template <class T>
void field_from_json(const ordered_json& j, T& out, const std::string& name) {
  try {
    if constexpr (std::is_same_v<T, Mode>) {
      out = parse_mode(j.get<std::string>());
    } else if constexpr (std::is_same_v<T, AuctionMode>) {
      out = parse_auction_mode(j.get<std::string>());
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw Error(Errc::invalid_config, name + " must be a boolean");
      out = j.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!j.is_number_integer()) throw Error(Errc::invalid_config, name + " must be an integer");
      out = j.get<T>();
    } else {
      if (!j.is_number()) throw Error(Errc::invalid_config, name + " must be a number");
      out = j.get<T>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_config, name + ": " + e.what());
  }
}

template <class T>
void field_from_text(std::string_view text, T& out, const std::string& name) {
  auto bad = [&] {
    return Error(Errc::invalid_config,
                 "invalid value '" + std::string(text) + "' for " + name);
  };
  if constexpr (std::is_same_v<T, Mode>) {
    out = parse_mode(text);
  } else if constexpr (std::is_same_v<T, AuctionMode>) {
    out = parse_auction_mode(text);
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1") out = true;
    else if (text == "false" || text == "0") out = false;
    else throw bad();
  } else {
    T v{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw bad();
    out = v;
  }
}

}  // namespace

void validate(const SimConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(Errc::invalid_config, msg); };
  const auto& w = c.world;
  if (w.width < 1 || w.height < 1) fail("world.width and world.height must be positive");
  if (w.width > 0xffff || w.height > 0xffff) fail("world dimensions must fit in 16 bits");
  if (w.poi_count < 0 || w.nfz_count < 0 || w.agent_count < 0) fail("world counts must be nonnegative");
  if (w.redundancy < 1) fail("world.redundancy must be at least 1");
  validate(c.learner);
  if (c.learner.steps_per_episode < 1) fail("learner.steps_per_episode must be positive");
  if (c.learner.episodes_per_iteration < 0) fail("learner.episodes_per_iteration must be nonnegative");
  if (c.learner.state_clip < 0 || c.learner.state_clip > kMaxStateClip)
    fail("learner.state_clip must be in [0, 127]");
  if (c.learner.random_init_range < 0) fail("learner.random_init_range must be nonnegative");
  const auto& e = c.economy;
  if (e.cost_per_step < 0) fail("economy.cost_per_step must be nonnegative");
  if (e.bid_fraction < 0 || e.bid_fraction > 1) fail("economy.bid_fraction must be in [0, 1]");
  if (e.initial_capital < 0) fail("economy.initial_capital must be nonnegative");
  if (c.reward.poi_reward_max < 0) fail("reward.poi_reward_max must be nonnegative");
  if (c.run.iterations < 0) fail("run.iterations must be nonnegative");
  if (c.run.checkpoint_every < 0) fail("run.checkpoint_every must be nonnegative");
  if (c.run.eval_episodes < 1) fail("run.eval_episodes must be positive");
  if (c.run.compare_seeds < 1) fail("run.compare_seeds must be positive");
  if (!(c.run.final_window > 0 && c.run.final_window <= 1)) fail("run.final_window must be in (0, 1]");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  SimConfig c;
  visit_fields(c, [&](const char* section, const char* key, auto&) {
    keys.push_back(std::string(section) + "." + key);
  });
  return keys;
}

std::string to_config_text(const SimConfig& config) {
  ordered_json j;
  visit_fields(config, [&](const char* section, const char* key, const auto& v) {
    j[section][key] = field_to_json(v);
  });
  return j.dump(2) + "\n";
}

SimConfig from_config_text(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::invalid_config, std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::invalid_config, "config must be a JSON object");

  SimConfig config;
  std::size_t matched = 0;
  visit_fields(config, [&](const char* section, const char* key, auto& v) {
    auto s = j.find(section);
    if (s == j.end() || !s->is_object()) return;
    auto f = s->find(key);
    if (f == s->end()) return;
    field_from_json(*f, v, qualified(section, key));
    ++matched;
  });

  std::size_t present = 0;
  for (const auto& [name, section] : j.items()) {
    if (!section.is_object()) throw Error(Errc::invalid_config, "section '" + name + "' must be an object");
    present += section.size();
  }
  if (present != matched) {
    // Name the first unknown key.
    SimConfig probe;
    for (const auto& [sname, section] : j.items()) {
      for (const auto& [kname, _] : section.items()) {
        bool known = false;
        visit_fields(probe, [&](const char* s, const char* k, auto&) {
          known = known || (sname == s && kname == k);
        });
        if (!known) throw Error(Errc::invalid_config, "unknown config key '" + sname + "." + kname + "'");
      }
    }
  }
  validate(config);
  return config;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_config, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_config_text(buf.str());
}

void save_config(const SimConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot write config file " + path.string());
  out << to_config_text(config);
  if (!out) throw Error(Errc::io_failure, "failed writing " + path.string());
}

void apply_override(SimConfig& config, std::string_view key, std::string_view value) {
  bool found = false;
  visit_fields(config, [&](const char* section, const char* k, auto& v) {
    const std::string name = qualified(section, k);
    if (name == key) {
      field_from_text(value, v, name);
      found = true;
    }
  });
  if (!found) throw Error(Errc::invalid_config, "unknown config key '" + std::string(key) + "'");
}

}  // namespace swarm
