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

#include <stdexcept>
#include <string>
#include <string_view>

namespace swarm {

enum class Errc {
  invalid_config,
  placement_overflow,
  already_completed,
  unknown_poi,
  stale_broadcast,
  config_mismatch,
  io_failure,
  version_mismatch,
  exists_without_force,
  empty_input,
  invariant_violation,
};

std::string_view to_string(Errc code);

// All library failures surface as swarm::Error; code() lets callers map them
// to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace swarm
