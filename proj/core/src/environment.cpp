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

#include "swarm/environment.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "swarm/error.hpp"
#include "swarm/rng.hpp"

namespace swarm {

GridWorld::GridWorld(int width, int height, int time_limit, std::vector<Cell> nofly,
                     std::vector<Poi> pois)
    : width_(width),
      height_(height),
      time_limit_(time_limit),
      nofly_(std::move(nofly)),
      pois_(std::move(pois)) {
  if (width_ < 1 || height_ < 1) throw Error(Errc::invalid_config, "grid dimensions must be positive");
  if (time_limit_ < 0) throw Error(Errc::invalid_config, "time limit must be nonnegative");
  const auto cells = static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  nofly_mask_.assign(cells, 0);
  poi_index_.assign(cells, -1);
  for (Cell c : nofly_) {
    if (!in_bounds(c)) throw Error(Errc::invalid_config, "no-fly cell outside the grid");
    nofly_mask_[index(c)] = 1;
  }
  for (std::size_t i = 0; i < pois_.size(); ++i) {
    Poi& p = pois_[i];
    if (p.id != static_cast<PoiId>(i)) throw Error(Errc::invalid_config, "POI ids must be 0..n-1 in order");
    if (!in_bounds(p.position)) throw Error(Errc::invalid_config, "POI outside the grid");
    if (nofly_mask_[index(p.position)]) throw Error(Errc::invalid_config, "POI placed on a no-fly cell");
    if (poi_index_[index(p.position)] >= 0) throw Error(Errc::invalid_config, "two POIs share a cell");
    if (p.redundancy < 1) throw Error(Errc::invalid_config, "POI redundancy must be at least 1");
    poi_index_[index(p.position)] = p.id;
    if (p.completed) ++completed_count_;
  }
}

void GridWorld::set_step(int step) {
  if (step < 0 || step > time_limit_) throw Error(Errc::invariant_violation, "step outside [0, T]");
  step_ = step;
}

const Poi& GridWorld::poi(PoiId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= pois_.size())
    throw Error(Errc::unknown_poi, "unknown POI " + std::to_string(id));
  return pois_[static_cast<std::size_t>(id)];
}

std::optional<PoiId> GridWorld::poi_at(Cell c) const {
  if (!in_bounds(c)) return std::nullopt;
  const int id = poi_index_[index(c)];
  if (id < 0) return std::nullopt;
  return id;
}

void GridWorld::mark_completed(PoiId id, int at_step) {
  poi(id);  // bounds check
  Poi& p = pois_[static_cast<std::size_t>(id)];
  if (p.completed) throw Error(Errc::already_completed, "POI " + std::to_string(id) + " already completed");
  if (at_step < 0 || at_step > time_limit_)
    throw Error(Errc::invariant_violation, "completion step outside [0, T]");
  p.completed = true;
  p.completed_at = at_step;
  ++completed_count_;
}

bool GridWorld::record_visit(PoiId id, AgentId agent, int at_step) {
  const Poi& p = poi(id);
  if (p.completed) return false;
  auto& visitors = pois_[static_cast<std::size_t>(id)].visitors;
  if (std::find(visitors.begin(), visitors.end(), agent) != visitors.end()) return false;
  visitors.push_back(agent);
  if (static_cast<int>(visitors.size()) >= p.redundancy) {
    mark_completed(id, at_step);
    return true;
  }
  return false;
}

std::string GridWorld::to_text(std::span<const AgentPose> poses) const {
  std::string out;
  out.reserve(static_cast<std::size_t>((width_ + 1) * height_));
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const Cell c{x, y};
      char ch = '.';
      if (is_nofly(c)) ch = 'N';
      if (auto id = poi_at(c)) ch = pois_[static_cast<std::size_t>(*id)].completed ? 'p' : 'P';
      for (const auto& pose : poses) {
        if (pose.position == c) ch = 'A';
      }
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

std::string GridWorld::to_json(std::span<const AgentPose> poses) const {
  nlohmann::ordered_json j;
  j["width"] = width_;
  j["height"] = height_;
  j["step"] = step_;
  j["time_limit"] = time_limit_;
  j["nofly"] = nlohmann::ordered_json::array();
  for (Cell c : nofly_) j["nofly"].push_back({c.x, c.y});
  j["pois"] = nlohmann::ordered_json::array();
  for (const auto& p : pois_) {
    nlohmann::ordered_json jp;
    jp["id"] = p.id;
    jp["x"] = p.position.x;
    jp["y"] = p.position.y;
    jp["completed"] = p.completed;
    jp["completed_at"] = p.completed_at ? nlohmann::ordered_json(*p.completed_at) : nullptr;
    jp["redundancy"] = p.redundancy;
    j["pois"].push_back(std::move(jp));
  }
  j["agents"] = nlohmann::ordered_json::array();
  for (const auto& a : poses) j["agents"].push_back({{"id", a.agent_id}, {"x", a.position.x}, {"y", a.position.y}});
  return j.dump();
}

World init_world(const SimConfig& config, std::uint64_t seed) {
  const auto& w = config.world;
  if (w.width < 1 || w.height < 1) throw Error(Errc::invalid_config, "grid dimensions must be positive");
  if (w.poi_count < 0 || w.nfz_count < 0 || w.agent_count < 0)
    throw Error(Errc::invalid_config, "placement counts must be nonnegative");
  const long cells = static_cast<long>(w.width) * w.height;
  const long wanted = static_cast<long>(w.poi_count) + w.nfz_count + w.agent_count;
  if (wanted > cells) {
    throw Error(Errc::placement_overflow, std::to_string(wanted) + " placements requested on " +
                                              std::to_string(cells) + " cells");
  }

  // Partial Fisher-Yates over cell indices.
  Rng rng(seed);
  std::vector<int> order(static_cast<std::size_t>(cells));
  std::iota(order.begin(), order.end(), 0);
  for (long i = 0; i < wanted; ++i) {
    const auto j = i + static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(cells - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  auto cell_at = [&](long i) {
    const int v = order[static_cast<std::size_t>(i)];
    return Cell{v % w.width, v / w.width};
  };

  std::vector<Poi> pois;
  long next = 0;
  for (int i = 0; i < w.poi_count; ++i) {
    Poi p;
    p.id = i;
    p.position = cell_at(next++);
    p.redundancy = w.redundancy;
    pois.push_back(std::move(p));
  }
  std::vector<Cell> nofly;
  for (int i = 0; i < w.nfz_count; ++i) nofly.push_back(cell_at(next++));
  std::vector<AgentPose> poses;
  for (int i = 0; i < w.agent_count; ++i) poses.push_back({i, cell_at(next++)});

  return World{GridWorld(w.width, w.height, config.time_limit(), std::move(nofly), std::move(pois)),
               std::move(poses)};
}

MoveOutcome apply_move(const GridWorld& world, const AgentPose& pose, Cell dir,
                       std::span<const AgentPose> agents) {
  MoveOutcome out;
  out.from = pose.position;
  const Cell target = pose.position + dir;
  if (is_unit_direction(dir) && world.passable(target)) {
    out.new_position = target;
  } else {
    out.new_position = pose.position;
    out.blocked = true;
  }
  for (const auto& other : agents) {
    if (other.agent_id != pose.agent_id && other.position == out.new_position) {
      out.collided = true;
      break;
    }
  }
  if (auto id = world.poi_at(out.new_position); id && !world.poi(*id).completed) {
    out.pois_reached.push_back(*id);
  }
  return out;
}

std::optional<PoiId> nearest_owned_target(const GridWorld& world, Cell from,
                                          std::span<const Contract> owned) {
  std::optional<PoiId> best;
  int best_dist = 0;
  for (const auto& c : owned) {
    if (c.completed) continue;
    const Poi& p = world.poi(c.poi_id);
    if (p.completed) continue;
    const int d = chebyshev(from, p.position);
    if (!best || d < best_dist || (d == best_dist && c.poi_id < *best)) {
      best = c.poi_id;
      best_dist = d;
    }
  }
  return best;
}

double completion_value(const RewardParams& params, int step, int time_limit) {
  if (time_limit <= 0) return 0.0;
  const double frac = 1.0 - static_cast<double>(step) / static_cast<double>(time_limit);
  return params.poi_reward_max * std::max(0.0, frac);
}

StepReward step_reward(const GridWorld& world, const MoveOutcome& outcome,
                       std::span<const Contract> owned, const RewardParams& params,
                       std::span<const AgentPose> others) {
  StepReward r;
  for (PoiId id : outcome.pois_reached) {
    if (world.poi(id).completed) continue;
    const bool covered = std::any_of(owned.begin(), owned.end(), [&](const Contract& c) {
      return c.poi_id == id && !c.completed;
    });
    if (covered) r.completion += completion_value(params, world.step(), world.time_limit());
  }

  if (auto target = nearest_owned_target(world, outcome.from, owned)) {
    const Cell t = world.poi(*target).position;
    r.shaping += params.alpha * (chebyshev(outcome.from, t) - chebyshev(outcome.new_position, t));
  }
  if (params.beta != 0.0) {
    int crowd = 0;
    for (const auto& o : others) {
      if (chebyshev(o.position, outcome.new_position) <= 1) ++crowd;
    }
    r.shaping -= params.beta * crowd;
  }

  r.penalty = params.step_penalty;
  if (outcome.blocked) r.penalty += params.block_penalty;
  if (outcome.collided) r.penalty += params.collision_penalty;
  return r;
}

std::optional<int> path_distance(const GridWorld& world, Cell from, Cell to) {
  if (!world.passable(from) || !world.passable(to)) return std::nullopt;
  if (from == to) return 0;
  const auto w = static_cast<std::size_t>(world.width());
  std::vector<int> dist(w * static_cast<std::size_t>(world.height()), -1);
  auto idx = [w](Cell c) { return static_cast<std::size_t>(c.y) * w + static_cast<std::size_t>(c.x); };
  std::deque<Cell> frontier{from};
  dist[idx(from)] = 0;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    for (Cell d : kDirections) {
      const Cell n = c + d;
      if (!world.passable(n) || dist[idx(n)] >= 0) continue;
      dist[idx(n)] = dist[idx(c)] + 1;
      if (n == to) return dist[idx(n)];
      frontier.push_back(n);
    }
  }
  return std::nullopt;
}

}  // namespace swarm
