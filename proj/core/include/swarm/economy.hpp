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

#include <optional>
#include <span>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/contract.hpp"
#include "swarm/environment.hpp"

namespace swarm {

struct Wallet {
  AgentId agent_id = 0;
  double capital = 0.0;
  std::vector<ContractId> owned;
};

struct AuctionBroadcast {
  ContractId contract_id = 0;
  AgentId seller = 0;
  double reserve = 0.0;
};

struct Bid {
  ContractId contract_id = 0;
  AgentId bidder = 0;
  double price = 0.0;
};

struct TradeRecord {
  int step = 0;
  ContractId contract_id = 0;
  AgentId seller = 0;
  AgentId buyer = 0;
  double price = 0.0;

  friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

// Contracts indexed by id plus one wallet per agent, indexed by agent id.
struct Market {
  std::vector<Contract> contracts;
  std::vector<Wallet> wallets;

  const Contract& contract(ContractId id) const { return contracts.at(static_cast<std::size_t>(id)); }
  Contract& contract(ContractId id) { return contracts.at(static_cast<std::size_t>(id)); }
  bool owns(AgentId agent, ContractId id) const;
  // Any contract (live or completed) on this POI held by the agent.
  bool holds_poi(AgentId agent, PoiId poi) const;
  std::vector<Contract> owned_contracts(AgentId agent) const;
  double total_capital() const;
};

// Issues `redundancy` contracts per POI (ids POI-major) and deals them
// round-robin over agents; every wallet starts with initial_capital.
Market issue_contracts(const GridWorld& world, int agent_count, int redundancy,
                       double initial_capital);

// Refreshes reward_info / elapsed for the current step.
void refresh_contracts(Market& market, const RewardParams& reward, int step, int time_limit);

// Steps the agent expects to spend reaching the contract's POI.
double travel_distance(const GridWorld& world, Cell from, const Contract& contract,
                       const EconomyParams& params);

// Expected profit: reward_info minus travel cost. May be negative.
double valuation(const AgentPose& pose, const Contract& contract, const GridWorld& world,
                 const EconomyParams& params);

// Distance the agent covers before reaching `contract` when it visits the
// live contracts in `route` (plus `contract`) nearest-first from `from`.
double route_distance(const GridWorld& world, Cell from, const Contract& contract,
                      std::span<const Contract> route, const EconomyParams& params);

// Valuation charging route_distance; equals the direct form for an empty
// route.
double route_valuation(const AgentPose& pose, const Contract& contract,
                       std::span<const Contract> route, const GridWorld& world,
                       const EconomyParams& params);

std::vector<AuctionBroadcast> select_sales(const Wallet& wallet, const AgentPose& pose,
                                           const Market& market, const GridWorld& world,
                                           const EconomyParams& params);

std::vector<Bid> make_bids(const Wallet& wallet, const AgentPose& pose,
                           std::span<const AuctionBroadcast> broadcasts, const Market& market,
                           const GridWorld& world, const EconomyParams& params);

// Highest valid price wins, ties to the lowest agent id. Bids the bidder can
// no longer afford are ignored. Throws stale_broadcast if the seller no longer
// owns the contract.
std::optional<TradeRecord> settle_auction(const AuctionBroadcast& broadcast,
                                          std::span<const Bid> bids, Market& market, int step);

struct TradeRewards {
  double seller = 0.0;
  double buyer = 0.0;
};
TradeRewards trade_rewards(const TradeRecord& trade, const EconomyParams& params);

struct AuctionRound {
  std::vector<AuctionBroadcast> broadcasts;
  std::vector<Bid> bids;
  std::vector<TradeRecord> trades;
};

// One broadcast / bid / settle cycle. Price mode settles broadcasts in
// ascending contract id. Distance mode lets each agent, in id order, claim
// its nearest uncompleted contract at zero price.
AuctionRound run_auction_round(Market& market, std::span<const AgentPose> poses,
                               const GridWorld& world, const EconomyParams& params, int step);

}  // namespace swarm
