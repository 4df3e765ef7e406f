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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/contract.hpp"
#include "swarm/geometry.hpp"

namespace swarm {

struct Poi {
  PoiId id = 0;
  Cell position;
  bool completed = false;
  std::optional<int> completed_at;
  int redundancy = 1;
  // Distinct agents that have visited; the POI completes once this reaches
  // redundancy.
  std::vector<AgentId> visitors;
};

struct AgentPose {
  AgentId agent_id = 0;
  Cell position;
};

struct MoveOutcome {
  Cell from;
  Cell new_position;
  bool blocked = false;
  bool collided = false;
  std::vector<PoiId> pois_reached;
};

class GridWorld {
 public:
  GridWorld(int width, int height, int time_limit, std::vector<Cell> nofly,
            std::vector<Poi> pois);

  int width() const { return width_; }
  int height() const { return height_; }
  int time_limit() const { return time_limit_; }
  int step() const { return step_; }
  void set_step(int step);

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool is_nofly(Cell c) const { return in_bounds(c) && nofly_mask_[index(c)] != 0; }
  bool passable(Cell c) const { return in_bounds(c) && nofly_mask_[index(c)] == 0; }

  const std::vector<Cell>& nofly() const { return nofly_; }
  const std::vector<Poi>& pois() const { return pois_; }
  const Poi& poi(PoiId id) const;
  std::optional<PoiId> poi_at(Cell c) const;

  // Throws already-completed / unknown-poi.
  void mark_completed(PoiId id, int at_step);
  // Records a distinct visitor; returns true if this visit completed the POI.
  bool record_visit(PoiId id, AgentId agent, int at_step);

  bool all_done() const { return completed_count_ == static_cast<int>(pois_.size()); }
  int completed_count() const { return completed_count_; }

  // One row per y, one char per cell: '.', 'N', 'P', 'p' (completed), 'A'.
  std::string to_text(std::span<const AgentPose> poses) const;
  std::string to_json(std::span<const AgentPose> poses) const;

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  int width_;
  int height_;
  int time_limit_;
  int step_ = 0;
  std::vector<Cell> nofly_;
  std::vector<Poi> pois_;
  std::vector<std::uint8_t> nofly_mask_;
  std::vector<int> poi_index_;  // cell -> POI id, -1 if none
  int completed_count_ = 0;
};

struct World {
  GridWorld grid;
  std::vector<AgentPose> poses;
};

// Samples POIs, then no-fly cells, then agent starts without replacement.
World init_world(const SimConfig& config, std::uint64_t seed);

// Other agents' poses are consulted for collisions only; an entry with the
// moving agent's id is ignored.
MoveOutcome apply_move(const GridWorld& world, const AgentPose& pose, Cell direction,
                       std::span<const AgentPose> agents);

struct StepReward {
  double completion = 0.0;
  double shaping = 0.0;
  double penalty = 0.0;

  double total() const { return completion + shaping - penalty; }
};

// Nearest uncompleted POI covered by an uncompleted owned contract, by
// Chebyshev distance with ties to the lowest POI id.
std::optional<PoiId> nearest_owned_target(const GridWorld& world, Cell from,
                                          std::span<const Contract> owned);

// Completion decays linearly with the step index; shaping rewards progress
// towards the pre-move target and (with beta) penalises crowding.
StepReward step_reward(const GridWorld& world, const MoveOutcome& outcome,
                       std::span<const Contract> owned, const RewardParams& params,
                       std::span<const AgentPose> others = {});

double completion_value(const RewardParams& params, int step, int time_limit);

// Shortest 8-connected path length avoiding no-fly cells; nullopt when
// unreachable.
std::optional<int> path_distance(const GridWorld& world, Cell from, Cell to);

}  // namespace swarm
