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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/geometry.hpp"
#include "swarm/rng.hpp"

namespace swarm {

// Agent cell plus the offset to its current target, each component clipped to
// [-clip, clip]. has_target is false for an agent with nothing left to visit.
struct StateKey {
  Cell agent_cell;
  Cell target_delta;
  bool has_target = true;

  friend constexpr bool operator==(const StateKey&, const StateKey&) = default;
};

inline constexpr int kMaxStateClip = 127;

StateKey encode_state(Cell agent, std::optional<Cell> target, int clip);

// Packs a StateKey into 64 bits: x:16 | y:16 | dx+clip:8 | dy+clip:8 | flag:1.
std::uint64_t pack(const StateKey& s, int clip);
StateKey unpack(std::uint64_t key, int clip);

struct QTableInfo {
  int clip = 20;
  int width = 0;
  int height = 0;
  double default_value = 0.0;
  // Unseen pairs read as default_value + uniform(-range, range), drawn from a
  // hash of (init_seed, key, action) so reads stay pure.
  double init_range = 0.0;
  std::uint64_t init_seed = 0;

  friend bool operator==(const QTableInfo&, const QTableInfo&) = default;
};

class QTable {
 public:
  QTable() = default;
  explicit QTable(QTableInfo info) : info_(info) {}

  const QTableInfo& info() const { return info_; }

  double value(const StateKey& s, int action) const;
  std::array<double, kActionCount> values(const StateKey& s) const;
  double max_value(const StateKey& s) const;
  void set(const StateKey& s, int action, double v);
  bool contains(const StateKey& s, int action) const;

  // Number of explicitly stored (state, action) pairs.
  std::size_t entry_count() const { return entries_; }

  struct Entry {
    std::uint64_t key;
    int action;
    double value;
  };
  // Entries sorted by (key, action).
  std::vector<Entry> sorted_entries() const;

  void save(const std::filesystem::path& path) const;
  static QTable load(const std::filesystem::path& path);
  std::string to_json() const;

  friend bool operator==(const QTable& a, const QTable& b);

 private:
  struct Row {
    std::array<double, kActionCount> q{};
    std::uint8_t present = 0;
  };
  double unseen_value(std::uint64_t key, int action) const;

  QTableInfo info_;
  std::unordered_map<std::uint64_t, Row> rows_;
  std::size_t entries_ = 0;
};

inline constexpr char kQTableMagic[4] = {'S', 'W', 'Q', 'T'};
inline constexpr std::uint32_t kQTableVersion = 1;

// Lowest index wins ties.
int greedy_action(const QTable& q, const StateKey& s);

// With probability epsilon a uniform action; otherwise greedy. Always draws
// exactly one uniform01 (plus one index when exploring).
int select_action(const QTable& q, const StateKey& s, double epsilon, Rng& rng);

// One-step Q-learning. next == nullopt marks a terminal transition. Returns the
// new value of (s, action).
double update(QTable& q, const StateKey& s, int action, double reward,
              const std::optional<StateKey>& next, const LearnerParams& params);

LearnerParams decay_epsilon(LearnerParams params);

void validate(const LearnerParams& params);

}  // namespace swarm
