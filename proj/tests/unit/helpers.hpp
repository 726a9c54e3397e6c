// Copyright 2026 The daesim Authors
//
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

#include <memory>
#include <vector>

#include "daesim/engine.hpp"

namespace daesim::testing {

inline std::unique_ptr<FixedLatencyModel> fixed(Cycle latency, std::uint32_t max_outstanding = 256) {
  return std::make_unique<FixedLatencyModel>(FixedLatencyConfig{latency, latency, max_outstanding});
}

/// Registers used by the small hand-written loops in tests.
struct Counter {
  std::uint64_t i = 0;
  std::uint64_t n = 0;
  Word acc = 0;
  bool done = false;
};

}  // namespace daesim::testing
