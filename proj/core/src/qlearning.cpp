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

#include "swarm/qlearning.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "swarm/error.hpp"

namespace swarm {

StateKey encode_state(Cell agent, std::optional<Cell> target, int clip) {
  if (!target) return StateKey{agent, {0, 0}, false};
  const Cell d = *target - agent;
  return StateKey{agent, {std::clamp(d.x, -clip, clip), std::clamp(d.y, -clip, clip)}, true};
}

std::uint64_t pack(const StateKey& s, int clip) {
  const auto u = [](int v) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)); };
  return (u(s.agent_cell.x) & 0xffff) | ((u(s.agent_cell.y) & 0xffff) << 16) |
         ((u(s.target_delta.x + clip) & 0xff) << 32) | ((u(s.target_delta.y + clip) & 0xff) << 40) |
         (static_cast<std::uint64_t>(s.has_target) << 48);
}

StateKey unpack(std::uint64_t key, int clip) {
  StateKey s;
  s.agent_cell.x = static_cast<int>(key & 0xffff);
  s.agent_cell.y = static_cast<int>((key >> 16) & 0xffff);
  s.target_delta.x = static_cast<int>((key >> 32) & 0xff) - clip;
  s.target_delta.y = static_cast<int>((key >> 40) & 0xff) - clip;
  s.has_target = ((key >> 48) & 1) != 0;
  return s;
}

double QTable::unseen_value(std::uint64_t key, int action) const {
  if (info_.init_range == 0.0) return info_.default_value;
  const std::uint64_t h =
      splitmix64(info_.init_seed ^ splitmix64(key * kActionCount + static_cast<std::uint64_t>(action)));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return info_.default_value + info_.init_range * (2.0 * u - 1.0);
}

double QTable::value(const StateKey& s, int action) const {
  const auto key = pack(s, info_.clip);
  if (auto it = rows_.find(key); it != rows_.end() && (it->second.present >> action & 1)) {
    return it->second.q[static_cast<std::size_t>(action)];
  }
  return unseen_value(key, action);
}

std::array<double, kActionCount> QTable::values(const StateKey& s) const {
  const auto key = pack(s, info_.clip);
  std::array<double, kActionCount> out;
  const auto it = rows_.find(key);
  for (int a = 0; a < kActionCount; ++a) {
    const auto i = static_cast<std::size_t>(a);
    out[i] = (it != rows_.end() && (it->second.present >> a & 1)) ? it->second.q[i] : unseen_value(key, a);
  }
  return out;
}

double QTable::max_value(const StateKey& s) const {
  const auto v = values(s);
  return *std::max_element(v.begin(), v.end());
}

bool QTable::contains(const StateKey& s, int action) const {
  const auto it = rows_.find(pack(s, info_.clip));
  return it != rows_.end() && (it->second.present >> action & 1);
}

void QTable::set(const StateKey& s, int action, double v) {
  Row& row = rows_[pack(s, info_.clip)];
  const auto bit = static_cast<std::uint8_t>(1u << action);
  if (!(row.present & bit)) {
    row.present |= bit;
    ++entries_;
  }
  row.q[static_cast<std::size_t>(action)] = v;
}

std::vector<QTable::Entry> QTable::sorted_entries() const {
  std::vector<Entry> out;
  out.reserve(entries_);
  for (const auto& [key, row] : rows_) {
    for (int a = 0; a < kActionCount; ++a) {
      if (row.present >> a & 1) out.push_back({key, a, row.q[static_cast<std::size_t>(a)]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Entry& x, const Entry& y) {
    return x.key != y.key ? x.key < y.key : x.action < y.action;
  });
  return out;
}

bool operator==(const QTable& a, const QTable& b) {
  if (!(a.info_ == b.info_) || a.entries_ != b.entries_) return false;
  const auto ea = a.sorted_entries();
  const auto eb = b.sorted_entries();
  return std::equal(ea.begin(), ea.end(), eb.begin(), eb.end(), [](const QTable::Entry& x, const QTable::Entry& y) {
    return x.key == y.key && x.action == y.action &&
           std::bit_cast<std::uint64_t>(x.value) == std::bit_cast<std::uint64_t>(y.value);
  });
}

namespace {

// Fixed little-endian encoding regardless of host byte order.
void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}
  bool has(std::size_t n) const { return data_.size() - pos_ >= n; }
  std::uint64_t u64() { return take(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::uint64_t take(int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
    return v;
  }
  std::string data_;
  std::size_t pos_ = 0;
};

constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 + 4 + 8 + 8 + 8 + 8;
constexpr std::size_t kEntryBytes = 8 + 1 + 8;

}  // namespace

void QTable::save(const std::filesystem::path& path) const {
  std::string buf;
  const auto entries = sorted_entries();
  buf.reserve(kHeaderBytes + entries.size() * kEntryBytes);
  buf.append(kQTableMagic, 4);
  put_u32(buf, kQTableVersion);
  put_u32(buf, static_cast<std::uint32_t>(info_.clip));
  put_u32(buf, static_cast<std::uint32_t>(info_.width));
  put_u32(buf, static_cast<std::uint32_t>(info_.height));
  put_u64(buf, std::bit_cast<std::uint64_t>(info_.default_value));
  put_u64(buf, std::bit_cast<std::uint64_t>(info_.init_range));
  put_u64(buf, info_.init_seed);
  put_u64(buf, entries.size());
  for (const auto& e : entries) {
    put_u64(buf, e.key);
    buf.push_back(static_cast<char>(e.action));
    put_u64(buf, std::bit_cast<std::uint64_t>(e.value));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot write checkpoint " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(Errc::io_failure, "failed writing checkpoint " + path.string());
}

QTable QTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot read checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Reader r(ss.str());

  if (!r.has(kHeaderBytes)) throw Error(Errc::version_mismatch, "checkpoint header truncated: " + path.string());
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  const std::uint32_t version = r.u32();
  if (std::memcmp(magic, kQTableMagic, 4) != 0 || version != kQTableVersion) {
    throw Error(Errc::version_mismatch, "unsupported checkpoint header in " + path.string() +
                                            " (expected SWQT v" + std::to_string(kQTableVersion) + ")");
  }
  QTableInfo info;
  info.clip = static_cast<int>(r.u32());
  info.width = static_cast<int>(r.u32());
  info.height = static_cast<int>(r.u32());
  info.default_value = std::bit_cast<double>(r.u64());
  info.init_range = std::bit_cast<double>(r.u64());
  info.init_seed = r.u64();
  const std::uint64_t count = r.u64();
  if (info.clip < 0 || info.clip > kMaxStateClip)
    throw Error(Errc::version_mismatch, "checkpoint header has invalid clip: " + path.string());
  if (r.remaining() != count * kEntryBytes)
    throw Error(Errc::io_failure, "checkpoint body size does not match entry count: " + path.string());

  QTable q(info);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t key = r.u64();
    const int action = r.u8();
    const double value = std::bit_cast<double>(r.u64());
    if (action >= kActionCount) throw Error(Errc::io_failure, "checkpoint entry has invalid action");
    Row& row = q.rows_[key];
    const auto bit = static_cast<std::uint8_t>(1u << action);
    if (row.present & bit) throw Error(Errc::io_failure, "duplicate checkpoint entry");
    row.present |= bit;
    row.q[static_cast<std::size_t>(action)] = value;
    ++q.entries_;
  }
  return q;
}

std::string QTable::to_json() const {
  nlohmann::ordered_json j;
  j["clip"] = info_.clip;
  j["width"] = info_.width;
  j["height"] = info_.height;
  j["default_value"] = info_.default_value;
  j["init_range"] = info_.init_range;
  j["init_seed"] = info_.init_seed;
  j["entry_count"] = entries_;
  auto& arr = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : sorted_entries()) {
    const StateKey s = unpack(e.key, info_.clip);
    arr.push_back({{"x", s.agent_cell.x},
                   {"y", s.agent_cell.y},
                   {"dx", s.target_delta.x},
                   {"dy", s.target_delta.y},
                   {"has_target", s.has_target},
                   {"action", e.action},
                   {"value", e.value}});
  }
  return j.dump(1);
}

int greedy_action(const QTable& q, const StateKey& s) {
  const auto v = q.values(s);
  int best = 0;
  for (int a = 1; a < kActionCount; ++a) {
    if (v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(best)]) best = a;
  }
  return best;
}

int select_action(const QTable& q, const StateKey& s, double epsilon, Rng& rng) {
  if (rng.uniform01() < epsilon) return static_cast<int>(rng.uniform_index(kActionCount));
  return greedy_action(q, s);
}

double update(QTable& q, const StateKey& s, int action, double reward,
              const std::optional<StateKey>& next, const LearnerParams& params) {
  const double current = q.value(s, action);
  const double bootstrap = next ? params.gamma * q.max_value(*next) : 0.0;
  const double updated = current + params.learning_rate * (reward + bootstrap - current);
  q.set(s, action, updated);
  return updated;
}

LearnerParams decay_epsilon(LearnerParams params) {
  params.epsilon *= params.epsilon_decay;
  return params;
}

void validate(const LearnerParams& p) {
  auto fail = [](const char* msg) { throw Error(Errc::invalid_config, msg); };
  if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0)) fail("learner.epsilon must be in [0, 1]");
  if (!(p.epsilon_decay > 0.0 && p.epsilon_decay <= 1.0)) fail("learner.epsilon_decay must be in (0, 1]");
  if (!(p.gamma >= 0.0 && p.gamma < 1.0)) fail("learner.gamma must be in [0, 1)");
  if (!(p.learning_rate > 0.0 && p.learning_rate <= 1.0)) fail("learner.learning_rate must be in (0, 1]");
}

}  // namespace swarm
