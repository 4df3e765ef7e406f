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
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <algorithm>

namespace swarm {

using AgentId = int;
using PoiId = int;
using ContractId = int;

struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
  constexpr Cell operator+(Cell o) const { return {x + o.x, y + o.y}; }
  constexpr Cell operator-(Cell o) const { return {x - o.x, y - o.y}; }
};

inline constexpr int kActionCount = 8;

// Action index -> unit offset. Counter-clockwise starting east; even indices
// are orthogonal, odd indices diagonal.
inline constexpr std::array<Cell, kActionCount> kDirections = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

constexpr Cell direction(int action) { return kDirections[static_cast<std::size_t>(action)]; }

constexpr bool is_unit_direction(Cell d) {
  return d.x >= -1 && d.x <= 1 && d.y >= -1 && d.y <= 1 && !(d.x == 0 && d.y == 0);
}

// Travel time between cells under 8-connectivity on an open grid.
constexpr int chebyshev(Cell a, Cell b) {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

}  // namespace swarm
