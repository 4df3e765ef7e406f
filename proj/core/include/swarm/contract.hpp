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

#include "swarm/geometry.hpp"

namespace swarm {

// Tradable claim on a POI. Only the current owner earns the POI's completion
// reward.
struct Contract {
  ContractId contract_id = 0;
  PoiId poi_id = 0;
  AgentId owner = 0;
  double reward_info = 0.0;  // expected completion reward if finished now
  double price_info = 0.0;   // last trade price
  int elapsed = 0;           // steps since issue
  bool completed = false;
};

}  // namespace swarm
