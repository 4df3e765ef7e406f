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

#include "swarm/economy.hpp"

#include <algorithm>
#include <numeric>

#include "swarm/error.hpp"

namespace swarm {

namespace {

bool live(const Contract& c, const GridWorld& world) {
  return !c.completed && !world.poi(c.poi_id).completed;
}

double cell_distance(const GridWorld& world, Cell from, Cell to, const EconomyParams& params) {
  if (params.use_path_distance) {
    if (auto d = path_distance(world, from, to)) return *d;
    return static_cast<double>(world.width()) * world.height();
  }
  return chebyshev(from, to);
}

void transfer(Market& market, ContractId id, AgentId seller, AgentId buyer, double price) {
  auto& from = market.wallets.at(static_cast<std::size_t>(seller)).owned;
  from.erase(std::find(from.begin(), from.end(), id));
  auto& to = market.wallets.at(static_cast<std::size_t>(buyer)).owned;
  to.insert(std::upper_bound(to.begin(), to.end(), id), id);
  market.wallets[static_cast<std::size_t>(seller)].capital += price;
  market.wallets[static_cast<std::size_t>(buyer)].capital -= price;
  Contract& c = market.contract(id);
  c.owner = buyer;
  c.price_info = price;
}

}  // namespace

bool Market::owns(AgentId agent, ContractId id) const {
  return contract(id).owner == agent;
}

bool Market::holds_poi(AgentId agent, PoiId poi) const {
  const auto& w = wallets.at(static_cast<std::size_t>(agent));
  return std::any_of(w.owned.begin(), w.owned.end(),
                     [&](ContractId id) { return contract(id).poi_id == poi; });
}

std::vector<Contract> Market::owned_contracts(AgentId agent) const {
  std::vector<Contract> out;
  const auto& w = wallets.at(static_cast<std::size_t>(agent));
  out.reserve(w.owned.size());
  for (ContractId id : w.owned) out.push_back(contract(id));
  return out;
}

double Market::total_capital() const {
  return std::accumulate(wallets.begin(), wallets.end(), 0.0,
                         [](double acc, const Wallet& w) { return acc + w.capital; });
}

Market issue_contracts(const GridWorld& world, int agent_count, int redundancy,
                       double initial_capital) {
  Market m;
  m.wallets.resize(static_cast<std::size_t>(agent_count));
  for (int i = 0; i < agent_count; ++i) {
    m.wallets[static_cast<std::size_t>(i)] = Wallet{i, initial_capital, {}};
  }
  if (agent_count == 0) return m;
  ContractId next = 0;
  for (const Poi& p : world.pois()) {
    for (int k = 0; k < redundancy; ++k) {
      Contract c;
      c.contract_id = next;
      c.poi_id = p.id;
      c.owner = next % agent_count;
      m.contracts.push_back(c);
      m.wallets[static_cast<std::size_t>(c.owner)].owned.push_back(next);
      ++next;
    }
  }
  return m;
}

void refresh_contracts(Market& market, const RewardParams& reward, int step, int time_limit) {
  const double estimate = completion_value(reward, step, time_limit);
  for (auto& c : market.contracts) {
    c.elapsed = step;
    c.reward_info = c.completed ? 0.0 : estimate;
  }
}

double travel_distance(const GridWorld& world, Cell from, const Contract& contract,
                       const EconomyParams& params) {
  return cell_distance(world, from, world.poi(contract.poi_id).position, params);
}

double valuation(const AgentPose& pose, const Contract& contract, const GridWorld& world,
                 const EconomyParams& params) {
  return contract.reward_info - travel_distance(world, pose.position, contract, params) * params.cost_per_step;
}

double route_distance(const GridWorld& world, Cell from, const Contract& contract,
                      std::span<const Contract> route, const EconomyParams& params) {
  // Stops: live POIs of the route plus the contract's own POI, deduplicated.
  std::vector<PoiId> stops;
  stops.push_back(contract.poi_id);
  for (const auto& c : route) {
    if (!live(c, world) || std::find(stops.begin(), stops.end(), c.poi_id) != stops.end()) continue;
    stops.push_back(c.poi_id);
  }
  double travelled = 0.0;
  Cell at = from;
  while (!stops.empty()) {
    // Same ordering rule as target selection: Chebyshev, then lowest POI id.
    auto next = stops.begin();
    int best = chebyshev(at, world.poi(*next).position);
    for (auto it = std::next(stops.begin()); it != stops.end(); ++it) {
      const int d = chebyshev(at, world.poi(*it).position);
      if (d < best || (d == best && *it < *next)) {
        best = d;
        next = it;
      }
    }
    const Cell to = world.poi(*next).position;
    travelled += cell_distance(world, at, to, params);
    if (*next == contract.poi_id) return travelled;
    at = to;
    stops.erase(next);
  }
  return travelled;
}

double route_valuation(const AgentPose& pose, const Contract& contract,
                       std::span<const Contract> route, const GridWorld& world,
                       const EconomyParams& params) {
  return contract.reward_info - route_distance(world, pose.position, contract, route, params) * params.cost_per_step;
}

std::vector<AuctionBroadcast> select_sales(const Wallet& wallet, const AgentPose& pose,
                                           const Market& market, const GridWorld& world,
                                           const EconomyParams& params) {
  std::vector<AuctionBroadcast> out;
  const auto route = params.route_aware ? market.owned_contracts(wallet.agent_id) : std::vector<Contract>{};
  for (ContractId id : wallet.owned) {
    const Contract& c = market.contract(id);
    if (!live(c, world)) continue;
    if (route_valuation(pose, c, route, world, params) < 0.0) out.push_back({id, wallet.agent_id, 0.0});
  }
  return out;
}

std::vector<Bid> make_bids(const Wallet& wallet, const AgentPose& pose,
                           std::span<const AuctionBroadcast> broadcasts, const Market& market,
                           const GridWorld& world, const EconomyParams& params) {
  std::vector<Bid> out;
  const auto route = params.route_aware ? market.owned_contracts(wallet.agent_id) : std::vector<Contract>{};
  for (const auto& b : broadcasts) {
    if (b.seller == wallet.agent_id) continue;
    const Contract& c = market.contract(b.contract_id);
    if (!live(c, world) || market.holds_poi(wallet.agent_id, c.poi_id)) continue;
    const double v = route_valuation(pose, c, route, world, params);
    if (v <= 0.0) continue;
    const double price = std::max(0.0, std::min(params.bid_fraction * v, wallet.capital));
    out.push_back({b.contract_id, wallet.agent_id, price});
  }
  return out;
}

std::optional<TradeRecord> settle_auction(const AuctionBroadcast& broadcast,
                                          std::span<const Bid> bids, Market& market, int step) {
  if (!market.owns(broadcast.seller, broadcast.contract_id)) {
    throw Error(Errc::stale_broadcast, "agent " + std::to_string(broadcast.seller) +
                                           " no longer owns contract " +
                                           std::to_string(broadcast.contract_id));
  }
  const Contract& c = market.contract(broadcast.contract_id);
  if (c.completed) return std::nullopt;

  const Bid* best = nullptr;
  for (const auto& b : bids) {
    if (b.contract_id != broadcast.contract_id || b.bidder == broadcast.seller) continue;
    if (b.price < broadcast.reserve || b.price < 0.0) continue;
    if (b.price > market.wallets.at(static_cast<std::size_t>(b.bidder)).capital) continue;
    if (market.holds_poi(b.bidder, c.poi_id)) continue;
    if (!best || b.price > best->price || (b.price == best->price && b.bidder < best->bidder)) best = &b;
  }
  if (!best) return std::nullopt;

  TradeRecord t{step, broadcast.contract_id, broadcast.seller, best->bidder, best->price};
  transfer(market, t.contract_id, t.seller, t.buyer, t.price);
  return t;
}

TradeRewards trade_rewards(const TradeRecord&, const EconomyParams& params) {
  return {params.trade_reward, -params.trade_reward};
}

namespace {

AuctionRound run_price_round(Market& market, std::span<const AgentPose> poses,
                             const GridWorld& world, const EconomyParams& params, int step) {
  AuctionRound round;
  for (const auto& pose : poses) {
    const auto& wallet = market.wallets.at(static_cast<std::size_t>(pose.agent_id));
    auto sales = select_sales(wallet, pose, market, world, params);
    round.broadcasts.insert(round.broadcasts.end(), sales.begin(), sales.end());
  }
  if (round.broadcasts.empty()) return round;
  std::sort(round.broadcasts.begin(), round.broadcasts.end(),
            [](const auto& a, const auto& b) { return a.contract_id < b.contract_id; });

  for (const auto& pose : poses) {
    const auto& wallet = market.wallets.at(static_cast<std::size_t>(pose.agent_id));
    auto bids = make_bids(wallet, pose, round.broadcasts, market, world, params);
    round.bids.insert(round.bids.end(), bids.begin(), bids.end());
  }
  for (const auto& b : round.broadcasts) {
    if (auto t = settle_auction(b, round.bids, market, step)) round.trades.push_back(*t);
  }
  return round;
}

// Every live contract is on offer; each agent in turn claims the one nearest
// to it. Claiming a contract already owned is a no-op.
AuctionRound run_distance_round(Market& market, std::span<const AgentPose> poses,
                                const GridWorld& world, const EconomyParams& params, int step) {
  AuctionRound round;
  for (const auto& c : market.contracts) {
    if (live(c, world)) round.broadcasts.push_back({c.contract_id, c.owner, 0.0});
  }
  for (const auto& pose : poses) {
    const AgentId me = pose.agent_id;
    const Contract* best = nullptr;
    double best_dist = 0.0;
    for (const auto& b : round.broadcasts) {
      const Contract& c = market.contract(b.contract_id);
      if (!live(c, world)) continue;
      if (c.owner != me && market.holds_poi(me, c.poi_id)) continue;
      const double d = travel_distance(world, pose.position, c, params);
      if (!best || d < best_dist) {
        best = &c;
        best_dist = d;
      }
    }
    if (!best || best->owner == me) continue;
    round.bids.push_back({best->contract_id, me, 0.0});
    TradeRecord t{step, best->contract_id, best->owner, me, 0.0};
    transfer(market, t.contract_id, t.seller, t.buyer, 0.0);
    round.trades.push_back(t);
  }
  return round;
}

}  // namespace

AuctionRound run_auction_round(Market& market, std::span<const AgentPose> poses,
                               const GridWorld& world, const EconomyParams& params, int step) {
  return params.auction_mode == AuctionMode::price ? run_price_round(market, poses, world, params, step)
                                                   : run_distance_round(market, poses, world, params, step);
}

}  // namespace swarm
