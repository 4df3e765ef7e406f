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

// Reference implementations used as test oracles. Deliberately written
// without any swarm code so a bug in the library cannot hide in both places.

#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using XY = std::pair<int, int>;

// Plain BFS over an 8-connected grid; `blocked` cells cannot be entered.
inline std::optional<int> bfs_distance(int w, int h, const std::set<XY>& blocked, XY from, XY to) {
  if (blocked.count(from) || blocked.count(to)) return std::nullopt;
  std::vector<int> dist(static_cast<std::size_t>(w * h), -1);
  auto at = [&](XY c) -> int& { return dist[static_cast<std::size_t>(c.second * w + c.first)]; };
  std::deque<XY> q{from};
  at(from) = 0;
  while (!q.empty()) {
    const XY c = q.front();
    q.pop_front();
    if (c == to) return at(c);
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        const XY n{c.first + dx, c.second + dy};
        if (n.first < 0 || n.second < 0 || n.first >= w || n.second >= h) continue;
        if (blocked.count(n) || at(n) >= 0) continue;
        at(n) = at(c) + 1;
        q.push_back(n);
      }
    }
  }
  return std::nullopt;
}

// Watkins update written out term by term.
inline double q_update(double q, double r, double max_next, double lr, double gamma) {
  const double target = r + gamma * max_next;
  const double td_error = target - q;
  return q + lr * td_error;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Two-pass sample mean / standard deviation (n - 1 denominator).
inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return out;
}

// Pearson chi-square statistic against a uniform distribution.
inline double chi_square_uniform(const std::vector<long>& counts) {
  long total = 0;
  for (long c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double chi = 0.0;
  for (long c : counts) chi += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return chi;
}

}  // namespace oracle
